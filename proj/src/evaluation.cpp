#include "feast/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "feast/error.hpp"
#include "feast/food_terms.hpp"

namespace feast {

using nlohmann::json;

CoverageReport coverage(std::span<const Prediction> predictions, Strategy strategy) {
    if (predictions.empty()) throw ParameterError("coverage of an empty prediction batch");
    CoverageReport r;
    r.strategy = strategy;
    r.total_pairs = predictions.size();
    for (const auto& p : predictions) {
        if (p.strategy != strategy) {
            throw ParameterError("coverage for " + std::string(to_string(strategy)) + " given a " +
                                 std::string(to_string(p.strategy)) + " prediction");
        }
        if (p.defined) ++r.defined_pairs;
    }
    r.coverage = static_cast<double>(r.defined_pairs) / static_cast<double>(r.total_pairs);
    return r;
}

void to_json(json& j, const CoverageReport& r) {
    j = json{{"strategy", to_string(r.strategy)},
             {"defined_pairs", r.defined_pairs},
             {"total_pairs", r.total_pairs},
             {"coverage", r.coverage}};
}

namespace {

template <std::size_t N>
void add_present(std::set<std::string>& out, const std::array<std::string_view, N>& terms, const FeatureSet& features) {
    for (const auto term : terms) {
        if (features.index_of(term)) out.emplace(term);
    }
}

}  // namespace

std::map<std::string, FoodPractice> default_food_practices(const FeatureSet& features) {
    FoodPractice pescatarian{"pescatarian", {}};
    add_present(pescatarian.forbidden_features, food_terms::meat, features);

    FoodPractice vegetarian{"vegetarian", pescatarian.forbidden_features};
    add_present(vegetarian.forbidden_features, food_terms::fish, features);

    FoodPractice vegan{"vegan", vegetarian.forbidden_features};
    add_present(vegan.forbidden_features, food_terms::egg, features);
    add_present(vegan.forbidden_features, food_terms::dairy, features);

    std::map<std::string, FoodPractice> out;
    for (auto* p : {&pescatarian, &vegetarian, &vegan}) out.emplace(p->name, std::move(*p));
    return out;
}

std::map<std::string, FoodPractice> food_practices_from_json(const json& j, const FeatureSet& features) {
    if (!j.is_object()) throw ValidationError("food practices must be a JSON object");
    std::map<std::string, FoodPractice> out;
    for (const auto& [name, terms] : j.items()) {
        if (!terms.is_array()) throw ValidationError("practice '" + name + "' must list feature terms");
        FoodPractice practice{name, {}};
        for (const auto& t : terms) {
            const auto term = t.get<std::string>();
            if (!features.index_of(term)) {
                throw ValidationError("practice '" + name + "' forbids '" + term + "', which is not a feature");
            }
            practice.forbidden_features.insert(term);
        }
        out.emplace(name, std::move(practice));
    }
    return out;
}

std::map<std::string, FoodPractice> load_food_practices(const std::filesystem::path& path, const FeatureSet& features) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
    return food_practices_from_json(j, features);
}

std::vector<PracticeViolation> check_food_practice(const RecList& list, const FoodPractice& practice,
                                                   const RecipeFeatureMatrix& matrix, const FeatureSet& features) {
    std::vector<PracticeViolation> out;
    if (practice.forbidden_features.empty()) return out;
    for (const auto& item : list.items) {
        for (const auto& [f, value] : recipe_features(matrix, item.recipe_id)) {
            if (value > 0.0 && practice.forbidden_features.contains(features[f].term)) {
                out.push_back(PracticeViolation{item.recipe_id, features[f].term});
            }
        }
    }
    return out;
}

bool follows_practice(const UserProfile& profile, const FoodPractice& practice, const FeatureSet& features) {
    if (practice.forbidden_features.empty()) return false;
    return std::all_of(practice.forbidden_features.begin(), practice.forbidden_features.end(), [&](const auto& term) {
        const auto f = features.index_of(term);
        return f && profile.preference(*f) == kDislike;
    });
}

// --- FSA ---------------------------------------------------------------------

namespace {

void band_to_json(json& j, const char* key, const FsaBand& b) {
    j[key] = json{{"green_max", b.green_max}, {"amber_max", b.amber_max}};
}

void band_from_json(const json& j, const char* key, FsaBand& b) {
    const auto it = j.find(key);
    if (it == j.end()) return;
    if (auto g = it->find("green_max"); g != it->end()) b.green_max = g->get<double>();
    if (auto a = it->find("amber_max"); a != it->end()) b.amber_max = a->get<double>();
    if (b.green_max < 0.0 || b.green_max > b.amber_max) {
        throw ValidationError(std::string("bad FSA band for ") + key);
    }
}

}  // namespace

void to_json(json& j, const FsaThresholds& t) {
    j = json::object();
    band_to_json(j, "fat", t.fat);
    band_to_json(j, "saturates", t.saturates);
    band_to_json(j, "sugar", t.sugar);
    band_to_json(j, "salt", t.salt);
}

void from_json(const json& j, FsaThresholds& t) {
    t = FsaThresholds{};
    band_from_json(j, "fat", t.fat);
    band_from_json(j, "saturates", t.saturates);
    band_from_json(j, "sugar", t.sugar);
    band_from_json(j, "salt", t.salt);
}

FsaThresholds load_fsa_thresholds(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    try {
        return json::parse(in).get<FsaThresholds>();
    } catch (const json::exception& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

int fsa_band(double grams_per_100g, const FsaBand& band) {
    if (grams_per_100g <= band.green_max) return 1;
    if (grams_per_100g <= band.amber_max) return 2;
    return 3;
}

int fsa_health_score(const NutritionFacts& n, const FsaThresholds& t) {
    return fsa_band(n.fat_g, t.fat) + fsa_band(n.saturates_g, t.saturates) + fsa_band(n.sugar_g, t.sugar) +
           fsa_band(n.salt_g, t.salt);
}

std::unordered_map<std::string, int> recipe_health_scores(std::span<const RecipeDocument> docs,
                                                          const FsaThresholds& thresholds) {
    std::unordered_map<std::string, int> out;
    for (const auto& doc : docs) {
        if (doc.nutrition) out.emplace(doc.id, fsa_health_score(*doc.nutrition, thresholds));
    }
    return out;
}

std::optional<double> avg_food_health_score(const UserProfile& profile,
                                            const std::unordered_map<std::string, int>& recipe_scores) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& [recipe, stars] : profile.recipe_ratings) {
        if (stars < kLikedStars) continue;
        const auto it = recipe_scores.find(recipe);
        if (it == recipe_scores.end()) continue;
        sum += it->second;
        ++count;
    }
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
}

// --- health groups -------------------------------------------------------------

std::string_view to_string(BmiClass c) {
    switch (c) {
        case BmiClass::underweight: return "underweight";
        case BmiClass::normal_weight: return "normal_weight";
        case BmiClass::pre_obesity: return "pre_obesity";
        case BmiClass::obesityclass_1: return "obesityclass_1";
    }
    return "unknown";
}

std::string_view to_string(FoodHealthClass c) {
    switch (c) {
        case FoodHealthClass::less_healthy: return "less_healthy";
        case FoodHealthClass::moderately_healthy: return "moderately_healthy";
        case FoodHealthClass::very_healthy: return "very_healthy";
    }
    return "unknown";
}

std::optional<FoodHealthClass> parse_food_health_class(std::string_view name) {
    for (auto c : {FoodHealthClass::less_healthy, FoodHealthClass::moderately_healthy, FoodHealthClass::very_healthy}) {
        if (to_string(c) == name) return c;
    }
    return std::nullopt;
}

void to_json(json& j, const HealthCutoffs& c) {
    j = json{{"bmi", {{"underweight_below", c.underweight_below},
                      {"normal_below", c.normal_below},
                      {"pre_obesity_below", c.pre_obesity_below},
                      {"obesity1_below", c.obesity1_below}}},
             {"food_health", {{"very_healthy_below", c.very_healthy_below},
                              {"moderately_healthy_below", c.moderately_healthy_below}}}};
}

void from_json(const json& j, HealthCutoffs& c) {
    c = HealthCutoffs{};
    if (auto b = j.find("bmi"); b != j.end()) {
        c.underweight_below = b->value("underweight_below", c.underweight_below);
        c.normal_below = b->value("normal_below", c.normal_below);
        c.pre_obesity_below = b->value("pre_obesity_below", c.pre_obesity_below);
        c.obesity1_below = b->value("obesity1_below", c.obesity1_below);
    }
    if (auto f = j.find("food_health"); f != j.end()) {
        c.very_healthy_below = f->value("very_healthy_below", c.very_healthy_below);
        c.moderately_healthy_below = f->value("moderately_healthy_below", c.moderately_healthy_below);
    }
    if (!(c.underweight_below <= c.normal_below && c.normal_below <= c.pre_obesity_below &&
          c.pre_obesity_below <= c.obesity1_below && c.very_healthy_below <= c.moderately_healthy_below)) {
        throw ValidationError("health cutoffs must be non-decreasing");
    }
}

std::optional<BmiClass> classify_bmi(double bmi, const HealthCutoffs& c) {
    if (bmi < c.underweight_below) return BmiClass::underweight;
    if (bmi < c.normal_below) return BmiClass::normal_weight;
    if (bmi < c.pre_obesity_below) return BmiClass::pre_obesity;
    if (bmi < c.obesity1_below) return BmiClass::obesityclass_1;
    return std::nullopt;
}

FoodHealthClass classify_food_health(double avg_score, const HealthCutoffs& c) {
    if (avg_score < c.very_healthy_below) return FoodHealthClass::very_healthy;
    if (avg_score < c.moderately_healthy_below) return FoodHealthClass::moderately_healthy;
    return FoodHealthClass::less_healthy;
}

HealthGroups classify_user(const UserProfile& profile, std::optional<double> avg_score, const HealthCutoffs& cutoffs) {
    HealthGroups g;
    if (profile.demographics) {
        const Demographics& d = *profile.demographics;
        g.activity_level = d.activity_level;
        if (d.height_m && d.weight_kg && *d.height_m > 0.0) {
            g.bmi = *d.weight_kg / (*d.height_m * *d.height_m);
            g.bmi_class = classify_bmi(*g.bmi, cutoffs);
        }
    }
    if (avg_score) g.food_health_class = classify_food_health(*avg_score, cutoffs);
    return g;
}

void to_json(json& j, const HealthGroups& g) {
    j = json::object();
    j["activity_level"] = g.activity_level ? json(to_string(*g.activity_level)) : json(nullptr);
    j["bmi"] = g.bmi ? json(*g.bmi) : json(nullptr);
    j["bmi_class"] = g.bmi_class ? json(to_string(*g.bmi_class)) : json(nullptr);
    j["food_health_class"] = g.food_health_class ? json(to_string(*g.food_health_class)) : json(nullptr);
}

// --- correlations ----------------------------------------------------------------

std::string_view to_string(HealthScale scale) {
    return scale == HealthScale::activity_level ? "activity_level" : "food_health_class";
}

std::optional<HealthScale> parse_health_scale(std::string_view name) {
    if (name == "activity_level") return HealthScale::activity_level;
    if (name == "food_health_class") return HealthScale::food_health_class;
    return std::nullopt;
}

std::optional<double> health_rank(const HealthGroups& groups, HealthScale scale) {
    if (scale == HealthScale::activity_level) {
        if (!groups.activity_level) return std::nullopt;
        return static_cast<double>(static_cast<int>(*groups.activity_level));
    }
    if (!groups.food_health_class) return std::nullopt;
    return static_cast<double>(static_cast<int>(*groups.food_health_class));
}

std::vector<CorrelationRow> CorrelationTable::significant() const {
    std::vector<CorrelationRow> out;
    std::copy_if(rows.begin(), rows.end(), std::back_inserter(out), [&](const CorrelationRow& r) { return r.p < alpha; });
    return out;
}

CorrelationTable feature_health_correlations(std::span<const UserProfile> profiles,
                                             std::span<const HealthGroups> groups, const FeatureSet& features,
                                             std::span<const HealthScale> scales, double alpha) {
    if (profiles.size() != groups.size()) throw ParameterError("profiles and health groups differ in length");
    CorrelationTable table;
    table.alpha = alpha;
    for (const HealthScale scale : scales) {
        std::vector<std::size_t> users;
        std::vector<double> ranks;
        for (std::size_t u = 0; u < profiles.size(); ++u) {
            if (const auto r = health_rank(groups[u], scale)) {
                users.push_back(u);
                ranks.push_back(*r);
            }
        }
        if (users.size() < 3) {
            spdlog::warn("correlations: only {} users have a {} value; scale skipped", users.size(), to_string(scale));
            continue;
        }
        std::vector<double> prefs(users.size());
        for (std::size_t f = 0; f < features.size(); ++f) {
            for (std::size_t i = 0; i < users.size(); ++i) prefs[i] = profiles[users[i]].preference(f);
            const SpearmanResult s = spearman(prefs, ranks);
            if (!s.rho) continue;
            table.rows.push_back(CorrelationRow{features[f].term, f, scale, *s.rho, s.p.value_or(1.0), s.n});
        }
    }
    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [](const CorrelationRow& a, const CorrelationRow& b) { return a.rho > b.rho; });
    return table;
}

std::string correlations_to_csv(std::span<const CorrelationRow> rows) {
    std::ostringstream out;
    out << "feature,scale,rho,p\n";
    char buf[64];
    for (const auto& r : rows) {
        out << r.feature << ',' << to_string(r.scale) << ',';
        std::snprintf(buf, sizeof buf, "%.6f,%.6g", r.rho, r.p);
        out << buf << '\n';
    }
    return out.str();
}

void to_json(json& j, const CorrelationRow& row) {
    j = json{{"feature", row.feature}, {"feature_index", row.feature_index}, {"scale", to_string(row.scale)},
             {"rho", row.rho},         {"p", row.p},                         {"n", row.n}};
}

}  // namespace feast
