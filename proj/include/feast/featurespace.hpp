#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "feast/corpus.hpp"
#include "feast/enstm.hpp"

namespace feast {

using FeatureEntry = std::pair<std::size_t, double>;  // (feature index, TF-IDF value)

/// Recipes x features; each entry is the recipe's TF-IDF for the feature term.
class RecipeFeatureMatrix {
public:
    RecipeFeatureMatrix() = default;
    RecipeFeatureMatrix(std::vector<std::string> recipe_ids, std::size_t num_features, SparseMatrix values,
                        std::string features_sha256);

    [[nodiscard]] const std::vector<std::string>& recipe_ids() const { return recipe_ids_; }
    [[nodiscard]] std::size_t num_recipes() const { return recipe_ids_.size(); }
    [[nodiscard]] std::size_t num_features() const { return num_features_; }
    [[nodiscard]] const SparseMatrix& values() const { return values_; }
    /// Hash of the canonical CSV of the FeatureSet this matrix was projected on.
    [[nodiscard]] const std::string& features_sha256() const { return features_sha256_; }

    /// Row position of `recipe_id`; throws NotFoundError.
    [[nodiscard]] std::size_t row_of(const std::string& recipe_id) const;
    [[nodiscard]] bool contains(const std::string& recipe_id) const;
    /// Non-zero entries of one row, ascending feature index.
    [[nodiscard]] std::vector<FeatureEntry> row(std::size_t r) const;

private:
    std::vector<std::string> recipe_ids_;
    std::size_t num_features_ = 0;
    SparseMatrix values_;
    std::string features_sha256_;
    std::unordered_map<std::string, std::size_t> rows_;
};

/// Column-selects the TF-IDF matrix at the feature terms, in FeatureSet order.
/// Throws ProjectionError naming every feature term missing from the vocabulary.
RecipeFeatureMatrix project_corpus(const SparseMatrix& tfidf_matrix, const std::vector<std::string>& recipe_ids,
                                   const std::vector<std::string>& vocabulary, const FeatureSet& features);

/// Non-zero (feature_index, value) pairs of a recipe, ascending feature index.
/// Throws NotFoundError for an unknown id.
std::vector<FeatureEntry> recipe_features(const RecipeFeatureMatrix& matrix, const std::string& recipe_id);

/// Text format:
///
///   # feast-matrix 1
///   # features_sha256=<hex>
///   # recipes=<n> features=<f>
///   recipe_id,feature_index,value
///   r1,0,0.79
///   r2,,            <- recipe whose row is all zeros
///
/// Rows appear in matrix order; values are written with 17 significant digits.
void save_matrix(const RecipeFeatureMatrix& matrix, const std::filesystem::path& path);

/// Loads a matrix and checks its binding hash against `features_path`.
/// Throws ArtifactMismatchError when the feature file differs.
RecipeFeatureMatrix load_matrix(const std::filesystem::path& path, const std::filesystem::path& features_path);
RecipeFeatureMatrix load_matrix(const std::filesystem::path& path);

}  // namespace feast
