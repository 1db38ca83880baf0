#include "feast/recommenders.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "feast/error.hpp"

namespace feast {

std::string_view to_string(Strategy strategy) {
    switch (strategy) {
        case Strategy::ffbr: return "ffbr";
        case Strategy::wffbr: return "wffbr";
        case Strategy::ffbcf: return "ffbcf";
        case Strategy::cb: return "cb";
    }
    return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
    for (Strategy s : kAllStrategies) {
        if (to_string(s) == name) return s;
    }
    return std::nullopt;
}

std::optional<double> score_ffbr(const UserProfile& profile, std::span<const FeatureEntry> recipe_row) {
    double raw = 0.0;
    bool any_rated = false;
    for (const auto& [feature, value] : recipe_row) {
        if (!(value > 0.0)) continue;
        const int rating = profile.preference(feature);
        if (rating == 0) continue;
        raw += rating;
        any_rated = true;
    }
    if (!any_rated) return std::nullopt;
    return raw;
}

std::optional<double> score_wffbr(const UserProfile& profile, std::span<const FeatureEntry> recipe_row,
                                  std::span<const double> weights) {
    double raw = 0.0;
    bool any_rated = false;
    for (const auto& [feature, value] : recipe_row) {
        if (!(value > 0.0)) continue;
        const int rating = profile.preference(feature);
        if (rating == 0) continue;
        if (feature >= weights.size()) throw ParameterError("feature index beyond the weight vector");
        raw += rating * weights[feature];
        any_rated = true;
    }
    if (!any_rated) return std::nullopt;
    return raw;
}

double preference_cosine(const UserProfile& a, const UserProfile& b) {
    double dot = 0.0;
    double norm_a = 0.0;
    double norm_b = 0.0;
    for (const auto& [f, v] : a.prefs) {
        norm_a += static_cast<double>(v) * v;
        dot += static_cast<double>(v) * b.preference(f);
    }
    for (const auto& [f, v] : b.prefs) norm_b += static_cast<double>(v) * v;
    if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
    return dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
}

NeighborList knn_neighbors(const UserProfile& target, std::span<const UserProfile> population, std::size_t n) {
    if (n == 0) throw ParameterError("knn needs n >= 1");
    NeighborList out;
    out.neighbors.reserve(population.size());
    for (const auto& other : population) {
        if (other.user_id == target.user_id) continue;
        out.neighbors.push_back(Neighbor{other.user_id, preference_cosine(target, other)});
    }
    std::sort(out.neighbors.begin(), out.neighbors.end(), [](const Neighbor& a, const Neighbor& b) {
        if (a.similarity != b.similarity) return a.similarity > b.similarity;
        return a.user_id < b.user_id;
    });
    if (out.neighbors.size() < n) {
        out.short_list = true;
    } else {
        out.neighbors.resize(n);
    }
    return out;
}

double DensifiedProfile::value(std::size_t feature_index) const {
    if (const auto it = rated.find(feature_index); it != rated.end()) return it->second;
    if (const auto it = predicted.find(feature_index); it != predicted.end()) return it->second;
    return 0.0;
}

DensifiedProfile densify(const UserProfile& target, std::span<const UserProfile> neighbors) {
    if (neighbors.empty()) throw ParameterError("densify needs at least one neighbour");
    DensifiedProfile out;
    out.rated = target.prefs;
    std::map<std::size_t, double> sums;
    for (const auto& neighbor : neighbors) {
        out.neighbor_ids.push_back(neighbor.user_id);
        for (const auto& [f, v] : neighbor.prefs) {
            if (target.prefs.contains(f)) continue;
            sums[f] += v;
        }
    }
    const double n = static_cast<double>(neighbors.size());
    for (const auto& [f, sum] : sums) out.predicted.emplace(f, sum / n);
    return out;
}

std::optional<double> score_ffbcf(const DensifiedProfile& densified, std::span<const FeatureEntry> recipe_row) {
    double raw = 0.0;
    bool any_feature = false;
    for (const auto& [feature, value] : recipe_row) {
        if (!(value > 0.0)) continue;
        any_feature = true;
        raw += densified.value(feature);
    }
    if (!any_feature) return std::nullopt;
    return raw;
}

SparseVector cb_profile_vector(const UserProfile& profile, const FeatureSet& features,
                               const std::vector<std::string>& vocabulary, std::span<const double> idf) {
    if (idf.size() != vocabulary.size()) throw ParameterError("idf and vocabulary sizes differ");
    SparseVector out(static_cast<Eigen::Index>(vocabulary.size()));
    std::map<Eigen::Index, double> entries;
    std::size_t liked = 0;
    for (const auto& [f, v] : profile.prefs) {
        if (v != kLike || f >= features.size()) continue;
        const auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), features[f].term);
        if (it == vocabulary.end() || *it != features[f].term) continue;
        const auto t = static_cast<std::size_t>(it - vocabulary.begin());
        ++liked;
        if (idf[t] > 0.0) entries[static_cast<Eigen::Index>(t)] += idf[t];
    }
    for (const auto& [t, v] : entries) out.insert(t) = v / static_cast<double>(liked);
    return out;
}

std::optional<double> score_cb(const SparseVector& profile_vector, const SparseVector& recipe_row) {
    if (profile_vector.size() != recipe_row.size()) throw ParameterError("CB vectors span different vocabularies");
    const double norms = profile_vector.norm() * recipe_row.norm();
    if (norms == 0.0) return std::nullopt;
    const double similarity = profile_vector.dot(recipe_row) / norms;
    if (similarity == 0.0) return std::nullopt;
    return similarity;
}

bool normalize_scores(std::vector<Prediction>& predictions) {
    double lo = 0.0;
    double hi = 0.0;
    bool any = false;
    for (const auto& p : predictions) {
        if (!p.defined || !p.raw_score) continue;
        lo = any ? std::min(lo, *p.raw_score) : *p.raw_score;
        hi = any ? std::max(hi, *p.raw_score) : *p.raw_score;
        any = true;
    }
    if (!any) {
        spdlog::warn("normalize_scores: batch of {} predictions has no defined score", predictions.size());
        return false;
    }
    const double span = hi - lo;
    for (auto& p : predictions) {
        if (!p.defined || !p.raw_score) {
            p.score.reset();
            continue;
        }
        if (span == 0.0) {
            p.score = 2.5;
        } else {
            p.score = std::clamp(5.0 * ((*p.raw_score - lo) / span), 0.0, 5.0);
        }
    }
    return true;
}

RecList build_reclist(std::span<const RankedItem> ranked, std::size_t top_n, std::size_t epochs, std::uint64_t seed) {
    if (epochs == 0) throw ParameterError("epochs must be >= 1");
    if (top_n == 0 || top_n % epochs != 0) {
        throw ParameterError("top_n=" + std::to_string(top_n) + " must be a positive multiple of epochs=" +
                             std::to_string(epochs));
    }
    if (ranked.size() < epochs) {
        throw InsufficientCandidatesError("only " + std::to_string(ranked.size()) + " ranked recipes for " +
                                          std::to_string(epochs) + " epochs");
    }
    const std::size_t effective = ranked.size() >= top_n ? top_n : (ranked.size() / epochs) * epochs;
    const std::size_t window = effective / epochs;

    RecList list;
    list.seed = seed;
    list.top_n = effective;
    std::mt19937_64 rng(seed);
    for (std::size_t e = 0; e < epochs; ++e) {
        const std::size_t lo = e * window;
        const std::size_t hi = lo + window;
        list.epoch_bounds.emplace_back(lo, hi);
        const std::size_t rank = lo + std::uniform_int_distribution<std::size_t>(0, window - 1)(rng);
        list.items.push_back(RecItem{ranked[rank].recipe_id, ranked[rank].score, e, rank});
    }
    return list;
}

void to_json(nlohmann::json& j, const RecList& list) {
    nlohmann::json items = nlohmann::json::array();
    for (const auto& item : list.items) {
        items.push_back({{"recipe_id", item.recipe_id}, {"score", item.score}, {"epoch", item.epoch}, {"rank", item.rank}});
    }
    nlohmann::json bounds = nlohmann::json::array();
    for (const auto& [lo, hi] : list.epoch_bounds) bounds.push_back({lo, hi});
    j = nlohmann::json{{"user_id", list.user_id}, {"strategy", to_string(list.strategy)},
                       {"seed", list.seed},       {"top_n", list.top_n},
                       {"epoch_bounds", bounds},  {"items", items}};
}

}  // namespace feast
