#include "support.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace feast::test {

namespace fs = std::filesystem;

TempDir::TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("feast-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter.fetch_add(1)));
    fs::remove_all(path_);
    fs::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << contents;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::size_t> Gen::sample(std::size_t n, std::size_t count) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng_);
    all.resize(std::min(count, n));
    return all;
}

UserProfile random_profile(Gen& gen, const std::string& id, std::size_t num_features, std::size_t likes,
                           std::size_t dislikes) {
    UserProfile p;
    p.user_id = id;
    const auto picked = gen.sample(num_features, likes + dislikes);
    for (std::size_t i = 0; i < picked.size(); ++i) p.prefs[picked[i]] = i < likes ? kLike : kDislike;
    return p;
}

UserProfile dense_random_profile(Gen& gen, const std::string& id, std::size_t num_features, double rated) {
    UserProfile p;
    p.user_id = id;
    for (std::size_t f = 0; f < num_features; ++f) {
        if (const int r = gen.rating(rated); r != 0) p.prefs[f] = r;
    }
    return p;
}

Pipeline build_pipeline(const PipelineOptions& options) {
    Pipeline p;
    SyntheticCorpusOptions corpus;
    corpus.recipes = options.recipes;
    corpus.seed = options.corpus_seed;
    p.recipes = generate_corpus(corpus);
    p.documents = documents_of(p.recipes);
    p.dtm = build_dtm(p.documents, default_stoplist());
    p.tfidf = tfidf(p.dtm);

    EnsembleConfig config;
    config.runs = options.runs;
    config.k_base = options.k;
    config.k_final = options.k;
    config.top_topics = options.top_topics;
    config.top_terms = options.top_terms;
    config.max_iters = options.max_iters;
    config.base_seed = options.ensemble_seed;
    const auto ttm = run_ensemble(p.tfidf.values, p.dtm.terms, config);
    p.features = extract_features(ttm, options.top_topics, options.top_terms);
    p.matrix = project_corpus(p.tfidf.values, p.dtm.docs, p.dtm.terms, p.features);
    p.engine = std::make_unique<Engine>(p.features, p.matrix, p.dtm.terms, p.dtm.docs, p.tfidf);
    return p;
}

std::vector<std::size_t> feature_indices(const FeatureSet& features, std::span<const std::string_view> terms) {
    std::vector<std::size_t> out;
    for (const auto term : terms) {
        if (const auto idx = features.index_of(term)) out.push_back(*idx);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace feast::test
