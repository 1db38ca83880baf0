#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>
#include <nlohmann/json.hpp>

#include "feast/enstm.hpp"
#include "feast/featurespace.hpp"
#include "feast/profiles.hpp"

namespace feast {

enum class Strategy { ffbr, wffbr, ffbcf, cb };

inline constexpr std::array<Strategy, 4> kAllStrategies = {Strategy::ffbr, Strategy::wffbr, Strategy::ffbcf,
                                                           Strategy::cb};

std::string_view to_string(Strategy strategy);
std::optional<Strategy> parse_strategy(std::string_view name);

struct Prediction {
    std::string user_id;
    std::string recipe_id;
    Strategy strategy = Strategy::ffbr;
    std::optional<double> raw_score;
    std::optional<double> score;  // set by normalize_scores, in [0, 5]
    bool defined = false;
};

// --- feature-sum scorers ---------------------------------------------------
//
// A recipe row lists the features present in the recipe. The sums below count
// presence only: the TF-IDF magnitude gates which features take part, the
// user's rating is what gets added.

/// Sum of the user's ratings over the recipe's features. nullopt when none of
/// the recipe's features is rated.
std::optional<double> score_ffbr(const UserProfile& profile, std::span<const FeatureEntry> recipe_row);

/// Like score_ffbr, with each rating scaled by the feature weight
/// (`weights[feature_index]`).
std::optional<double> score_wffbr(const UserProfile& profile, std::span<const FeatureEntry> recipe_row,
                                  std::span<const double> weights);

// --- collaborative densification --------------------------------------------

struct Neighbor {
    std::string user_id;
    double similarity = 0.0;
};

struct NeighborList {
    std::vector<Neighbor> neighbors;
    bool short_list = false;  // fewer than n candidates existed
};

/// Cosine of two preference vectors over the union of rated features,
/// unrated counting as 0; 0 when either vector is empty.
double preference_cosine(const UserProfile& a, const UserProfile& b);

/// The n most similar other users (by cosine), ties broken by user id. Users
/// sharing the target's id are skipped. Throws ParameterError for n == 0.
NeighborList knn_neighbors(const UserProfile& target, std::span<const UserProfile> population, std::size_t n);

struct DensifiedProfile {
    std::map<std::size_t, int> rated;           // the target's own ratings
    std::map<std::size_t, double> predicted;    // mean neighbour rating on features the target left at 0
    std::vector<std::string> neighbor_ids;

    /// Own rating if any, else the prediction, else 0.
    [[nodiscard]] double value(std::size_t feature_index) const;
};

/// For each feature the target did not rate but at least one neighbour did,
/// predicts the neighbours' ratings summed and divided by the neighbour count
/// (zeros included). Throws ParameterError for an empty neighbour list.
DensifiedProfile densify(const UserProfile& target, std::span<const UserProfile> neighbors);

/// Feature sum over rated-or-predicted values; nullopt only for a recipe
/// without features.
std::optional<double> score_ffbcf(const DensifiedProfile& densified, std::span<const FeatureEntry> recipe_row);

// --- content-based baseline -------------------------------------------------

using SparseVector = Eigen::SparseVector<double>;

/// Mean of the idf-weighted one-hot vectors of the user's liked feature terms,
/// i.e. the TF-IDF vector of a pseudo-document holding each liked term once.
SparseVector cb_profile_vector(const UserProfile& profile, const FeatureSet& features,
                               const std::vector<std::string>& vocabulary, std::span<const double> idf);

/// Cosine similarity; nullopt when either vector is zero or they are orthogonal.
std::optional<double> score_cb(const SparseVector& profile_vector, const SparseVector& recipe_row);

// --- batch normalization and list building --------------------------------

/// Min-max maps the defined raw scores of one user+strategy batch onto [0, 5]
/// (all 2.5 when they are equal). Returns false, leaving the batch untouched,
/// when nothing is defined.
bool normalize_scores(std::vector<Prediction>& predictions);

struct RankedItem {
    std::string recipe_id;
    double score = 0.0;
};

struct RecItem {
    std::string recipe_id;
    double score = 0.0;
    std::size_t epoch = 0;
    std::size_t rank = 0;  // zero-based position in the ranking
};

struct RecList {
    std::string user_id;
    Strategy strategy = Strategy::ffbr;
    std::vector<RecItem> items;
    std::vector<std::pair<std::size_t, std::size_t>> epoch_bounds;  // half-open rank ranges
    std::uint64_t seed = 0;
    std::size_t top_n = 0;  // after shrinking to the candidates available
};

/// Splits the first top_n ranks into `epochs` equal windows and draws one item
/// uniformly from each. With fewer than top_n candidates, top_n shrinks to the
/// largest multiple of `epochs` that fits. Throws ParameterError when epochs
/// does not divide top_n and InsufficientCandidatesError when fewer than
/// `epochs` items are ranked.
RecList build_reclist(std::span<const RankedItem> ranked, std::size_t top_n, std::size_t epochs,
                      std::uint64_t seed);

void to_json(nlohmann::json& j, const RecList& list);

}  // namespace feast
