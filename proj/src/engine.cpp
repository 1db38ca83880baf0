#include "feast/engine.hpp"

#include <algorithm>
#include <numeric>

#include <spdlog/spdlog.h>

#include "feast/error.hpp"
#include "feast/hash.hpp"

namespace feast {

Engine::Engine(FeatureSet features, RecipeFeatureMatrix matrix, std::vector<std::string> vocabulary,
               std::vector<std::string> documents, TfidfMatrix tfidf)
    : features_(std::move(features)),
      matrix_(std::move(matrix)),
      vocabulary_(std::move(vocabulary)),
      tfidf_(std::move(tfidf)),
      weights_(features_.weights()) {
    if (matrix_.features_sha256() != sha256_hex(features_to_csv(features_))) {
        throw ArtifactMismatchError("recipe-feature matrix was projected on a different feature set");
    }
    if (matrix_.num_features() != features_.size()) {
        throw ArtifactMismatchError("matrix has " + std::to_string(matrix_.num_features()) + " features, feature set has " +
                                    std::to_string(features_.size()));
    }
    if (documents != matrix_.recipe_ids()) {
        throw ArtifactMismatchError("matrix recipes differ from the document-term matrix documents");
    }
    if (static_cast<std::size_t>(tfidf_.values.rows()) != documents.size() ||
        static_cast<std::size_t>(tfidf_.values.cols()) != vocabulary_.size() || tfidf_.idf.size() != vocabulary_.size()) {
        throw ArtifactMismatchError("TF-IDF shape does not match the vocabulary");
    }
    for (const auto& f : features_) {
        if (!std::binary_search(vocabulary_.begin(), vocabulary_.end(), f.term)) {
            throw ArtifactMismatchError("feature '" + f.term + "' is not in the vocabulary");
        }
    }

    rows_.reserve(matrix_.num_recipes());
    tfidf_rows_.reserve(matrix_.num_recipes());
    for (std::size_t r = 0; r < matrix_.num_recipes(); ++r) {
        rows_.push_back(matrix_.row(r));
        SparseVector v(tfidf_.values.cols());
        for (SparseMatrix::InnerIterator it(tfidf_.values, static_cast<Eigen::Index>(r)); it; ++it) {
            v.insert(it.col()) = it.value();
        }
        tfidf_rows_.push_back(std::move(v));
    }
}

DensifiedProfile Engine::densified(const UserProfile& user, std::span<const UserProfile> population,
                                   std::size_t knn_n) const {
    const NeighborList knn = knn_neighbors(user, population, knn_n);
    if (knn.short_list) {
        spdlog::warn("user '{}': only {} neighbours available for n={}", user.user_id, knn.neighbors.size(), knn_n);
    }
    if (knn.neighbors.empty()) {
        DensifiedProfile alone;
        alone.rated = user.prefs;
        return alone;
    }
    std::vector<UserProfile> neighbors;
    neighbors.reserve(knn.neighbors.size());
    for (const auto& n : knn.neighbors) {
        const auto it = std::find_if(population.begin(), population.end(),
                                     [&](const UserProfile& p) { return p.user_id == n.user_id; });
        neighbors.push_back(*it);
    }
    return densify(user, neighbors);
}

std::vector<Prediction> Engine::predict(const UserProfile& user, Strategy strategy,
                                        std::span<const UserProfile> population, std::size_t knn_n) const {
    std::vector<Prediction> out(matrix_.num_recipes());
    DensifiedProfile dense;
    SparseVector cb_vector;
    if (strategy == Strategy::ffbcf) dense = densified(user, population, knn_n);
    if (strategy == Strategy::cb) cb_vector = cb_profile_vector(user, features_, vocabulary_, tfidf_.idf);

    for (std::size_t r = 0; r < out.size(); ++r) {
        Prediction& p = out[r];
        p.user_id = user.user_id;
        p.recipe_id = matrix_.recipe_ids()[r];
        p.strategy = strategy;
        switch (strategy) {
            case Strategy::ffbr: p.raw_score = score_ffbr(user, rows_[r]); break;
            case Strategy::wffbr: p.raw_score = score_wffbr(user, rows_[r], weights_); break;
            case Strategy::ffbcf: p.raw_score = score_ffbcf(dense, rows_[r]); break;
            case Strategy::cb: p.raw_score = score_cb(cb_vector, tfidf_rows_[r]); break;
        }
        p.defined = p.raw_score.has_value();
    }
    normalize_scores(out);
    return out;
}

std::vector<RankedItem> Engine::rank(const std::vector<Prediction>& predictions) {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (predictions[i].defined && predictions[i].score) order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return *predictions[a].score > *predictions[b].score;
    });
    std::vector<RankedItem> ranked;
    ranked.reserve(order.size());
    for (const std::size_t i : order) ranked.push_back(RankedItem{predictions[i].recipe_id, *predictions[i].score});
    return ranked;
}

RecList Engine::recommend(const UserProfile& user, Strategy strategy, std::span<const UserProfile> population,
                          const RecommendOptions& options) const {
    const auto ranked = rank(predict(user, strategy, population, options.knn_n));
    RecList list = build_reclist(ranked, options.top_n, options.epochs, options.seed);
    list.user_id = user.user_id;
    list.strategy = strategy;
    return list;
}

Engine load_engine(const std::filesystem::path& dtm_path, const std::filesystem::path& features_path,
                   const std::filesystem::path& matrix_path) {
    DocumentTermMatrix dtm = load_dtm(dtm_path);
    FeatureSet features = load_features(features_path);
    RecipeFeatureMatrix matrix = load_matrix(matrix_path, features_path);
    TfidfMatrix weights = tfidf(dtm);
    return Engine(std::move(features), std::move(matrix), std::move(dtm.terms), std::move(dtm.docs), std::move(weights));
}

}  // namespace feast
