#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "feast/corpus.hpp"
#include "feast/enstm.hpp"
#include "feast/featurespace.hpp"
#include "feast/profiles.hpp"
#include "feast/recommenders.hpp"

namespace feast {

struct RecommendOptions {
    std::size_t top_n = 2100;
    std::size_t epochs = 7;
    std::size_t knn_n = 10;
    std::uint64_t seed = 0;
};

/// Immutable scoring state: the feature set, the recipe x feature matrix and
/// the corpus TF-IDF (for the content-based baseline). Safe to share across
/// threads.
class Engine {
public:
    /// Throws ArtifactMismatchError when the matrix was not projected on
    /// `features` or its recipes differ from the TF-IDF documents.
    Engine(FeatureSet features, RecipeFeatureMatrix matrix, std::vector<std::string> vocabulary,
           std::vector<std::string> documents, TfidfMatrix tfidf);

    [[nodiscard]] const FeatureSet& features() const { return features_; }
    [[nodiscard]] const RecipeFeatureMatrix& matrix() const { return matrix_; }
    [[nodiscard]] const std::vector<std::string>& vocabulary() const { return vocabulary_; }
    [[nodiscard]] const std::vector<std::string>& recipe_ids() const { return matrix_.recipe_ids(); }
    [[nodiscard]] std::span<const FeatureEntry> recipe_row(std::size_t r) const { return rows_[r]; }

    /// FFbCF view of `user`: its ratings plus the mean ratings of its
    /// knn_n nearest neighbours in `population`.
    [[nodiscard]] DensifiedProfile densified(const UserProfile& user, std::span<const UserProfile> population,
                                             std::size_t knn_n) const;

    /// One normalized prediction per recipe, in matrix row order.
    [[nodiscard]] std::vector<Prediction> predict(const UserProfile& user, Strategy strategy,
                                                  std::span<const UserProfile> population, std::size_t knn_n) const;

    /// Defined predictions by score descending, ties by matrix row.
    [[nodiscard]] static std::vector<RankedItem> rank(const std::vector<Prediction>& predictions);

    [[nodiscard]] RecList recommend(const UserProfile& user, Strategy strategy,
                                    std::span<const UserProfile> population, const RecommendOptions& options) const;

private:
    FeatureSet features_;
    RecipeFeatureMatrix matrix_;
    std::vector<std::string> vocabulary_;
    TfidfMatrix tfidf_;
    std::vector<double> weights_;
    std::vector<std::vector<FeatureEntry>> rows_;
    std::vector<SparseVector> tfidf_rows_;
};

/// Loads the DTM, feature and matrix files written by the pipeline and checks
/// that they belong together.
Engine load_engine(const std::filesystem::path& dtm_path, const std::filesystem::path& features_path,
                   const std::filesystem::path& matrix_path);

}  // namespace feast
