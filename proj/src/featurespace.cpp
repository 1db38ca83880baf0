#include "feast/featurespace.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

#include "feast/error.hpp"
#include "feast/hash.hpp"

namespace feast {

RecipeFeatureMatrix::RecipeFeatureMatrix(std::vector<std::string> recipe_ids, std::size_t num_features,
                                         SparseMatrix values, std::string features_sha256)
    : recipe_ids_(std::move(recipe_ids)),
      num_features_(num_features),
      values_(std::move(values)),
      features_sha256_(std::move(features_sha256)) {
    if (values_.rows() != static_cast<Eigen::Index>(recipe_ids_.size()) ||
        values_.cols() != static_cast<Eigen::Index>(num_features_)) {
        throw ValidationError("recipe-feature matrix shape does not match its labels");
    }
    values_.makeCompressed();
    rows_.reserve(recipe_ids_.size());
    for (std::size_t r = 0; r < recipe_ids_.size(); ++r) {
        if (!rows_.emplace(recipe_ids_[r], r).second) {
            throw ValidationError("duplicate recipe id '" + recipe_ids_[r] + "'");
        }
    }
}

std::size_t RecipeFeatureMatrix::row_of(const std::string& recipe_id) const {
    const auto it = rows_.find(recipe_id);
    if (it == rows_.end()) throw NotFoundError("unknown recipe '" + recipe_id + "'");
    return it->second;
}

bool RecipeFeatureMatrix::contains(const std::string& recipe_id) const { return rows_.contains(recipe_id); }

std::vector<FeatureEntry> RecipeFeatureMatrix::row(std::size_t r) const {
    std::vector<FeatureEntry> out;
    for (SparseMatrix::InnerIterator it(values_, static_cast<Eigen::Index>(r)); it; ++it) {
        if (it.value() != 0.0) out.emplace_back(static_cast<std::size_t>(it.col()), it.value());
    }
    return out;
}

RecipeFeatureMatrix project_corpus(const SparseMatrix& tfidf_matrix, const std::vector<std::string>& recipe_ids,
                                   const std::vector<std::string>& vocabulary, const FeatureSet& features) {
    if (tfidf_matrix.rows() != static_cast<Eigen::Index>(recipe_ids.size()) ||
        tfidf_matrix.cols() != static_cast<Eigen::Index>(vocabulary.size())) {
        throw ParameterError("TF-IDF matrix shape does not match recipe ids and vocabulary");
    }
    std::unordered_map<std::string_view, std::size_t> vocab_index;
    vocab_index.reserve(vocabulary.size());
    for (std::size_t t = 0; t < vocabulary.size(); ++t) vocab_index.emplace(vocabulary[t], t);

    // vocabulary column -> feature column
    std::vector<int> feature_of(vocabulary.size(), -1);
    std::string missing;
    for (std::size_t f = 0; f < features.size(); ++f) {
        const auto it = vocab_index.find(features[f].term);
        if (it == vocab_index.end()) {
            missing += missing.empty() ? "" : ", ";
            missing += features[f].term;
            continue;
        }
        feature_of[it->second] = static_cast<int>(f);
    }
    if (!missing.empty()) throw ProjectionError("feature terms absent from the corpus vocabulary: " + missing);

    std::vector<Eigen::Triplet<double>> triplets;
    for (Eigen::Index r = 0; r < tfidf_matrix.outerSize(); ++r) {
        for (SparseMatrix::InnerIterator it(tfidf_matrix, r); it; ++it) {
            const int f = feature_of[static_cast<std::size_t>(it.col())];
            if (f >= 0 && it.value() != 0.0) triplets.emplace_back(static_cast<int>(r), f, it.value());
        }
    }
    SparseMatrix values(tfidf_matrix.rows(), static_cast<Eigen::Index>(features.size()));
    values.setFromTriplets(triplets.begin(), triplets.end());
    return RecipeFeatureMatrix(recipe_ids, features.size(), std::move(values), sha256_hex(features_to_csv(features)));
}

std::vector<FeatureEntry> recipe_features(const RecipeFeatureMatrix& matrix, const std::string& recipe_id) {
    return matrix.row(matrix.row_of(recipe_id));
}

void save_matrix(const RecipeFeatureMatrix& matrix, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "# feast-matrix 1\n";
    out << "# features_sha256=" << matrix.features_sha256() << '\n';
    out << "# recipes=" << matrix.num_recipes() << " features=" << matrix.num_features() << '\n';
    out << "recipe_id,feature_index,value\n";
    char buffer[64];
    for (std::size_t r = 0; r < matrix.num_recipes(); ++r) {
        const auto entries = matrix.row(r);
        const std::string& id = matrix.recipe_ids()[r];
        if (entries.empty()) {
            out << id << ",,\n";
            continue;
        }
        for (const auto& [f, v] : entries) {
            std::snprintf(buffer, sizeof buffer, "%.17g", v);
            out << id << ',' << f << ',' << buffer << '\n';
        }
    }
    if (!out) throw IoError("error while writing " + path.string());
}

RecipeFeatureMatrix load_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    const auto fail = [&](std::size_t line_no, const std::string& why) {
        return IoError("malformed matrix file " + path.string() + ":" + std::to_string(line_no) + ": " + why);
    };

    std::string line;
    std::size_t line_no = 0;
    const auto next_line = [&]() -> bool {
        if (!std::getline(in, line)) return false;
        ++line_no;
        return true;
    };

    if (!next_line() || line != "# feast-matrix 1") throw fail(1, "bad magic line");
    const std::string hash_prefix = "# features_sha256=";
    if (!next_line() || line.rfind(hash_prefix, 0) != 0) throw fail(line_no, "missing features hash");
    std::string hash = line.substr(hash_prefix.size());

    std::size_t n_recipes = 0, n_features = 0;
    if (!next_line() || std::sscanf(line.c_str(), "# recipes=%zu features=%zu", &n_recipes, &n_features) != 2) {
        throw fail(line_no, "missing dimensions");
    }
    if (!next_line() || line != "recipe_id,feature_index,value") throw fail(line_no, "missing column header");

    std::vector<std::string> ids;
    ids.reserve(n_recipes);
    std::vector<Eigen::Triplet<double>> triplets;
    while (next_line()) {
        if (line.empty()) continue;
        const auto c2 = line.rfind(',');
        const auto c1 = c2 == std::string::npos || c2 == 0 ? std::string::npos : line.rfind(',', c2 - 1);
        if (c1 == std::string::npos) throw fail(line_no, "expected three columns");
        std::string id = line.substr(0, c1);
        if (id.empty()) throw fail(line_no, "empty recipe id");
        if (ids.empty() || ids.back() != id) ids.push_back(id);

        const std::string_view index_text = std::string_view(line).substr(c1 + 1, c2 - c1 - 1);
        const std::string value_text = line.substr(c2 + 1);
        if (index_text.empty() && value_text.empty()) continue;  // all-zero row

        std::size_t f = 0;
        const auto [ptr, ec] = std::from_chars(index_text.data(), index_text.data() + index_text.size(), f);
        if (ec != std::errc{} || ptr != index_text.data() + index_text.size() || f >= n_features) {
            throw fail(line_no, "bad feature index");
        }
        double v = 0.0;
        try {
            std::size_t used = 0;
            v = std::stod(value_text, &used);
            if (used != value_text.size()) throw fail(line_no, "bad value");
        } catch (const std::logic_error&) {
            throw fail(line_no, "bad value");
        }
        if (!(v > 0.0)) throw fail(line_no, "non-positive value");
        triplets.emplace_back(static_cast<int>(ids.size() - 1), static_cast<int>(f), v);
    }
    if (ids.size() != n_recipes) throw fail(line_no, "recipe count does not match header");

    SparseMatrix values(static_cast<Eigen::Index>(n_recipes), static_cast<Eigen::Index>(n_features));
    values.setFromTriplets(triplets.begin(), triplets.end());
    return RecipeFeatureMatrix(std::move(ids), n_features, std::move(values), std::move(hash));
}

RecipeFeatureMatrix load_matrix(const std::filesystem::path& path, const std::filesystem::path& features_path) {
    RecipeFeatureMatrix matrix = load_matrix(path);
    const std::string actual = sha256_file(features_path);
    if (actual != matrix.features_sha256()) {
        throw ArtifactMismatchError("matrix " + path.string() + " was projected on a different feature set than " +
                                    features_path.string());
    }
    return matrix;
}

}  // namespace feast
