#include "feast/profiles.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "feast/error.hpp"

namespace feast {

using nlohmann::json;

namespace {
constexpr std::array<std::string_view, 4> kActivityNames = {"sedentary", "lightly_active", "moderately_active",
                                                            "extra_active"};
}

std::string_view to_string(ActivityLevel level) { return kActivityNames[static_cast<std::size_t>(level)]; }

std::optional<ActivityLevel> parse_activity_level(std::string_view name) {
    for (std::size_t i = 0; i < kActivityNames.size(); ++i) {
        if (kActivityNames[i] == name) return static_cast<ActivityLevel>(i);
    }
    return std::nullopt;
}

std::optional<Verdict> parse_verdict(std::string_view name) {
    if (name == "like") return Verdict::like;
    if (name == "dislike") return Verdict::dislike;
    if (name == "clear") return Verdict::clear;
    return std::nullopt;
}

int UserProfile::preference(std::size_t feature_index) const {
    const auto it = prefs.find(feature_index);
    return it == prefs.end() ? 0 : it->second;
}

std::size_t UserProfile::like_count() const {
    return static_cast<std::size_t>(std::count_if(prefs.begin(), prefs.end(), [](const auto& p) { return p.second == kLike; }));
}

std::size_t UserProfile::dislike_count() const {
    return static_cast<std::size_t>(
        std::count_if(prefs.begin(), prefs.end(), [](const auto& p) { return p.second == kDislike; }));
}

void set_preference(UserProfile& profile, std::size_t feature_index, Verdict verdict, std::size_t num_features) {
    if (feature_index >= num_features) {
        throw ValidationError("feature index " + std::to_string(feature_index) + " out of range (have " +
                              std::to_string(num_features) + " features)");
    }
    switch (verdict) {
        case Verdict::like: profile.prefs[feature_index] = kLike; break;
        case Verdict::dislike: profile.prefs[feature_index] = kDislike; break;
        case Verdict::clear: profile.prefs.erase(feature_index); break;
    }
}

PolicyReport validate_profile(const UserProfile& profile, const ElicitationPolicy& policy) {
    PolicyReport r;
    r.likes = profile.like_count();
    r.dislikes = profile.dislike_count();
    const auto need_likes = static_cast<std::size_t>(std::max(0, policy.min_likes));
    const auto need_dislikes = static_cast<std::size_t>(std::max(0, policy.min_dislikes));
    r.missing_likes = r.likes >= need_likes ? 0 : need_likes - r.likes;
    r.missing_dislikes = r.dislikes >= need_dislikes ? 0 : need_dislikes - r.dislikes;
    r.ok = r.missing_likes == 0 && r.missing_dislikes == 0;
    return r;
}

void rate_recipe(UserProfile& profile, const std::string& recipe_id, int stars) {
    if (stars < 0 || stars > kMaxStars) {
        throw ValidationError("rating must be 0..5 stars, got " + std::to_string(stars));
    }
    if (recipe_id.empty()) throw ValidationError("empty recipe id");
    profile.recipe_ratings[recipe_id] = stars;
}

void to_json(json& j, const Demographics& d) {
    j = json::object();
    if (d.height_m) j["height_m"] = *d.height_m;
    if (d.weight_kg) j["weight_kg"] = *d.weight_kg;
    if (d.activity_level) j["activity_level"] = to_string(*d.activity_level);
}

void from_json(const json& j, Demographics& d) {
    d = Demographics{};
    if (auto it = j.find("height_m"); it != j.end() && !it->is_null()) {
        d.height_m = it->get<double>();
        if (!(*d.height_m > 0.0)) throw ValidationError("height_m must be positive");
    }
    if (auto it = j.find("weight_kg"); it != j.end() && !it->is_null()) {
        d.weight_kg = it->get<double>();
        if (!(*d.weight_kg > 0.0)) throw ValidationError("weight_kg must be positive");
    }
    if (auto it = j.find("activity_level"); it != j.end() && !it->is_null()) {
        const auto name = it->get<std::string>();
        d.activity_level = parse_activity_level(name);
        if (!d.activity_level) throw ValidationError("unknown activity_level '" + name + "'");
    }
}

void to_json(json& j, const UserProfile& p) {
    json prefs = json::object();
    for (const auto& [f, v] : p.prefs) prefs[std::to_string(f)] = v;
    j = json{{"user_id", p.user_id}, {"prefs", prefs}, {"recipe_ratings", p.recipe_ratings}};
    if (p.demographics) j["demographics"] = *p.demographics;
}

void from_json(const json& j, UserProfile& p) {
    p = UserProfile{};
    j.at("user_id").get_to(p.user_id);
    if (auto it = j.find("prefs"); it != j.end()) {
        for (const auto& [key, value] : it->items()) {
            std::size_t index = 0;
            try {
                std::size_t used = 0;
                index = std::stoul(key, &used);
                if (used != key.size()) throw ValidationError("bad feature index '" + key + "'");
            } catch (const std::logic_error&) {
                throw ValidationError("bad feature index '" + key + "'");
            }
            const int v = value.get<int>();
            if (v != kLike && v != kDislike) throw ValidationError("preference values must be +5 or -5");
            p.prefs[index] = v;
        }
    }
    if (auto it = j.find("recipe_ratings"); it != j.end()) {
        for (const auto& [recipe, stars] : it->items()) rate_recipe(p, recipe, stars.get<int>());
    }
    if (auto it = j.find("demographics"); it != j.end() && !it->is_null()) p.demographics = it->get<Demographics>();
}

void to_json(json& j, const PolicyReport& r) {
    j = json{{"ok", r.ok},
             {"likes", r.likes},
             {"dislikes", r.dislikes},
             {"deficit", {{"likes", r.missing_likes}, {"dislikes", r.missing_dislikes}}}};
}

bool valid_user_id(std::string_view id) {
    if (id.empty() || id.size() > 64) return false;
    return std::all_of(id.begin(), id.end(), [](unsigned char c) { return std::isalnum(c) || c == '_' || c == '-'; });
}

}  // namespace feast
