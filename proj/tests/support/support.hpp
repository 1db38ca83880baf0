#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "feast/corpus.hpp"
#include "feast/engine.hpp"
#include "feast/enstm.hpp"
#include "feast/featurespace.hpp"
#include "feast/profiles.hpp"
#include "feast/synthetic.hpp"

namespace feast::test {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    [[nodiscard]] const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

void write_file(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

/// Small generator helpers on top of mt19937_64 for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
    /// -5, 0 or +5 with the given chance of being non-zero.
    int rating(double rated = 0.5) { return chance(rated) ? (chance(0.5) ? kLike : kDislike) : 0; }
    /// `count` distinct values from [0, n).
    std::vector<std::size_t> sample(std::size_t n, std::size_t count);

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// Profile with `likes` and `dislikes` distinct random features.
UserProfile random_profile(Gen& gen, const std::string& id, std::size_t num_features, std::size_t likes,
                           std::size_t dislikes);

/// Profile with each feature independently rated (see Gen::rating).
UserProfile dense_random_profile(Gen& gen, const std::string& id, std::size_t num_features, double rated);

/// Everything the pipeline produces for a synthetic corpus.
struct Pipeline {
    std::vector<SyntheticRecipe> recipes;
    std::vector<RecipeDocument> documents;
    DocumentTermMatrix dtm;
    TfidfMatrix tfidf;
    FeatureSet features;
    RecipeFeatureMatrix matrix;
    std::unique_ptr<Engine> engine;
};

struct PipelineOptions {
    std::size_t recipes = 500;
    std::uint64_t corpus_seed = 42;
    int runs = 6;
    int k = 30;
    int top_topics = 30;
    int top_terms = 15;
    int max_iters = 200;
    std::uint64_t ensemble_seed = 7;
};

Pipeline build_pipeline(const PipelineOptions& options);

/// Features whose term is in `terms`.
std::vector<std::size_t> feature_indices(const FeatureSet& features, std::span<const std::string_view> terms);

}  // namespace feast::test
