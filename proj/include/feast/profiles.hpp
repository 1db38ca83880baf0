#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

namespace feast {

inline constexpr int kLike = 5;
inline constexpr int kDislike = -5;
inline constexpr int kMaxStars = 5;

enum class ActivityLevel { sedentary, lightly_active, moderately_active, extra_active };

std::string_view to_string(ActivityLevel level);
std::optional<ActivityLevel> parse_activity_level(std::string_view name);

struct Demographics {
    std::optional<double> height_m;
    std::optional<double> weight_kg;
    std::optional<ActivityLevel> activity_level;
};

enum class Verdict { like, dislike, clear };

std::optional<Verdict> parse_verdict(std::string_view name);

struct UserProfile {
    std::string user_id;
    std::map<std::size_t, int> prefs;  // feature index -> +5 / -5; absent means 0
    std::optional<Demographics> demographics;
    std::map<std::string, int> recipe_ratings;  // recipe id -> stars 0..5

    [[nodiscard]] int preference(std::size_t feature_index) const;
    [[nodiscard]] std::size_t like_count() const;
    [[nodiscard]] std::size_t dislike_count() const;
};

/// like => +5, dislike => -5, clear => entry removed. Throws ValidationError
/// when feature_index >= num_features.
void set_preference(UserProfile& profile, std::size_t feature_index, Verdict verdict, std::size_t num_features);

struct ElicitationPolicy {
    int min_likes = 20;
    int min_dislikes = 20;
};

struct PolicyReport {
    bool ok = true;
    std::size_t likes = 0;
    std::size_t dislikes = 0;
    std::size_t missing_likes = 0;
    std::size_t missing_dislikes = 0;
};

PolicyReport validate_profile(const UserProfile& profile, const ElicitationPolicy& policy);

/// Stores (or overwrites) a 0..5 star rating; throws ValidationError otherwise.
void rate_recipe(UserProfile& profile, const std::string& recipe_id, int stars);

void to_json(nlohmann::json& j, const Demographics& d);
void from_json(const nlohmann::json& j, Demographics& d);
void to_json(nlohmann::json& j, const UserProfile& p);
void from_json(const nlohmann::json& j, UserProfile& p);
void to_json(nlohmann::json& j, const PolicyReport& r);

/// Ids usable as file names: 1-64 chars of [A-Za-z0-9_-].
bool valid_user_id(std::string_view id);

/// One JSON document per user (`<user_id>.json`) in a directory, cached in
/// memory. Writes to one profile are serialized; different profiles are
/// independent, and readers never see a partially applied update.
class ProfileStore {
public:
    explicit ProfileStore(std::filesystem::path directory);

    ProfileStore(const ProfileStore&) = delete;
    ProfileStore& operator=(const ProfileStore&) = delete;

    [[nodiscard]] std::optional<UserProfile> get(const std::string& user_id) const;
    [[nodiscard]] bool contains(const std::string& user_id) const;

    /// Throws ValidationError when the id is taken or invalid.
    void create(const UserProfile& profile);

    /// Applies `mutation` to a copy, persists it, then publishes it. If the
    /// mutation throws, nothing changes. Throws NotFoundError for unknown ids.
    UserProfile update(const std::string& user_id, const std::function<void(UserProfile&)>& mutation);

    /// Consistent per-profile copies, ordered by user id.
    [[nodiscard]] std::vector<UserProfile> snapshot() const;

    [[nodiscard]] const std::filesystem::path& directory() const { return directory_; }

private:
    struct Entry {
        mutable std::mutex mutex;
        UserProfile profile;
    };

    void persist(const UserProfile& profile) const;

    std::filesystem::path directory_;
    mutable std::shared_mutex map_mutex_;
    std::map<std::string, std::unique_ptr<Entry>> entries_;
};

/// Writes `contents` to a sibling temp file and renames it into place.
void write_file_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace feast
