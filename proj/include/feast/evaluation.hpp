#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "feast/corpus.hpp"
#include "feast/enstm.hpp"
#include "feast/featurespace.hpp"
#include "feast/profiles.hpp"
#include "feast/recommenders.hpp"

namespace feast {

// --- coverage ----------------------------------------------------------------

struct CoverageReport {
    Strategy strategy = Strategy::ffbr;
    std::size_t defined_pairs = 0;
    std::size_t total_pairs = 0;
    double coverage = 0.0;
};

/// Share of user x recipe pairs with a defined prediction. Throws
/// ParameterError for an empty batch or a prediction of another strategy.
CoverageReport coverage(std::span<const Prediction> predictions, Strategy strategy);

void to_json(nlohmann::json& j, const CoverageReport& r);

// --- food practices ------------------------------------------------------------

struct FoodPractice {
    std::string name;
    std::set<std::string> forbidden_features;
};

/// vegetarian (no meat or fish), vegan (no meat, fish, egg or dairy) and
/// pescatarian (no meat), limited to terms present in `features`.
std::map<std::string, FoodPractice> default_food_practices(const FeatureSet& features);

/// JSON object mapping practice name to a list of forbidden feature terms.
/// Throws ValidationError for a term outside `features`.
std::map<std::string, FoodPractice> food_practices_from_json(const nlohmann::json& j, const FeatureSet& features);
std::map<std::string, FoodPractice> load_food_practices(const std::filesystem::path& path, const FeatureSet& features);

struct PracticeViolation {
    std::string recipe_id;
    std::string feature;
};

/// Every (recommended recipe, forbidden feature it contains) pair.
std::vector<PracticeViolation> check_food_practice(const RecList& list, const FoodPractice& practice,
                                                   const RecipeFeatureMatrix& matrix, const FeatureSet& features);

/// True when the user disliked every forbidden feature of a non-empty practice.
bool follows_practice(const UserProfile& profile, const FoodPractice& practice, const FeatureSet& features);

// --- FSA health score ----------------------------------------------------------

/// Upper bounds (inclusive, grams per 100 g) of the green and amber bands.
struct FsaBand {
    double green_max = 0.0;
    double amber_max = 0.0;
};

struct FsaThresholds {
    FsaBand fat{3.0, 17.5};
    FsaBand saturates{1.5, 5.0};
    FsaBand sugar{5.0, 22.5};
    FsaBand salt{0.3, 1.5};
};

void to_json(nlohmann::json& j, const FsaThresholds& t);
/// Missing nutrients keep their defaults; throws ValidationError when a band
/// has green_max > amber_max or a negative bound.
void from_json(const nlohmann::json& j, FsaThresholds& t);
FsaThresholds load_fsa_thresholds(const std::filesystem::path& path);

/// 1 (green), 2 (amber) or 3 (red).
int fsa_band(double grams_per_100g, const FsaBand& band);

/// Sum of the four nutrient bands, 4 (healthiest) to 12.
int fsa_health_score(const NutritionFacts& nutrition, const FsaThresholds& thresholds);

/// Health score of every document that has nutrition facts.
std::unordered_map<std::string, int> recipe_health_scores(std::span<const RecipeDocument> docs,
                                                          const FsaThresholds& thresholds);

inline constexpr int kLikedStars = 4;

/// Mean score over the recipes the user rated 4 stars or more; recipes without
/// a score are skipped. nullopt when nothing remains.
std::optional<double> avg_food_health_score(const UserProfile& profile,
                                            const std::unordered_map<std::string, int>& recipe_scores);

// --- health groups -------------------------------------------------------------

enum class BmiClass { underweight, normal_weight, pre_obesity, obesityclass_1 };
enum class FoodHealthClass { less_healthy, moderately_healthy, very_healthy };

std::string_view to_string(BmiClass c);
std::string_view to_string(FoodHealthClass c);
std::optional<FoodHealthClass> parse_food_health_class(std::string_view name);

struct HealthCutoffs {
    // half-open BMI classes: [.., underweight_below) [.., normal_below) ...
    double underweight_below = 18.5;
    double normal_below = 25.0;
    double pre_obesity_below = 30.0;
    double obesity1_below = 35.0;
    // average FSA score: below very_healthy_below is very healthy, below
    // moderately_healthy_below moderately healthy, anything else less healthy
    double very_healthy_below = 6.0;
    double moderately_healthy_below = 8.0;
};

void to_json(nlohmann::json& j, const HealthCutoffs& c);
void from_json(const nlohmann::json& j, HealthCutoffs& c);

struct HealthGroups {
    std::optional<ActivityLevel> activity_level;
    std::optional<double> bmi;
    std::optional<BmiClass> bmi_class;  // absent at or above obesity1_below
    std::optional<FoodHealthClass> food_health_class;
};

std::optional<BmiClass> classify_bmi(double bmi, const HealthCutoffs& cutoffs);
FoodHealthClass classify_food_health(double avg_score, const HealthCutoffs& cutoffs);

/// Fields whose inputs are missing stay empty.
HealthGroups classify_user(const UserProfile& profile, std::optional<double> avg_score, const HealthCutoffs& cutoffs);

void to_json(nlohmann::json& j, const HealthGroups& g);

// --- Spearman correlation --------------------------------------------------------

/// 1-based ranks; tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

enum class PValueMethod { t_approximation, exact_permutation };

struct SpearmanResult {
    std::optional<double> rho;  // empty when x or y is constant
    std::optional<double> p;    // two-sided
    std::size_t n = 0;
};

/// Pearson correlation of the average ranks. The p-value uses Student's t with
/// n - 2 degrees of freedom, or enumerates all n! rank permutations of y
/// (n <= 10). Throws ParameterError for mismatched lengths or n < 3.
SpearmanResult spearman(std::span<const double> x, std::span<const double> y,
                        PValueMethod method = PValueMethod::t_approximation);

enum class HealthScale { activity_level, food_health_class };

std::string_view to_string(HealthScale scale);
std::optional<HealthScale> parse_health_scale(std::string_view name);

/// Ordinal position on a scale, healthier groups higher: sedentary 0 to
/// extra_active 3; less_healthy 0, moderately_healthy 1, very_healthy 2.
std::optional<double> health_rank(const HealthGroups& groups, HealthScale scale);

struct CorrelationRow {
    std::string feature;
    std::size_t feature_index = 0;
    HealthScale scale = HealthScale::food_health_class;
    double rho = 0.0;
    double p = 1.0;
    std::size_t n = 0;
};

struct CorrelationTable {
    std::vector<CorrelationRow> rows;  // every non-constant feature/scale, rho descending
    double alpha = 0.05;

    /// Rows with p < alpha.
    [[nodiscard]] std::vector<CorrelationRow> significant() const;
};

/// Spearman between each feature's preference values (-5/0/+5) and the users'
/// rank on each scale. Users without a value on a scale are left out of that
/// scale; scales with fewer than three users and constant features are
/// skipped.
CorrelationTable feature_health_correlations(std::span<const UserProfile> profiles,
                                             std::span<const HealthGroups> groups, const FeatureSet& features,
                                             std::span<const HealthScale> scales, double alpha = 0.05);

/// `feature,scale,rho,p` with a header line.
std::string correlations_to_csv(std::span<const CorrelationRow> rows);
void to_json(nlohmann::json& j, const CorrelationRow& row);

}  // namespace feast
