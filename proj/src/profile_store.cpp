#include <fstream>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>
#include <unistd.h>

#include "feast/error.hpp"
#include "feast/profiles.hpp"

namespace feast {

namespace fs = std::filesystem;

void write_file_atomically(const fs::path& path, const std::string& contents) {
    std::ostringstream suffix;
    suffix << ".tmp." << ::getpid() << '.' << std::this_thread::get_id();
    fs::path temp = path;
    temp += suffix.str();
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + temp.string());
        out << contents;
        out.flush();
        if (!out) throw IoError("error while writing " + temp.string());
    }
    std::error_code ec;
    fs::rename(temp, path, ec);
    if (ec) {
        fs::remove(temp, ec);
        throw IoError("cannot replace " + path.string());
    }
}

ProfileStore::ProfileStore(fs::path directory) : directory_(std::move(directory)) {
    std::error_code ec;
    fs::create_directories(directory_, ec);
    if (ec || !fs::is_directory(directory_)) throw IoError("cannot open profile directory " + directory_.string());

    for (const auto& item : fs::directory_iterator(directory_)) {
        if (!item.is_regular_file() || item.path().extension() != ".json") continue;
        std::ifstream in(item.path());
        try {
            auto profile = nlohmann::json::parse(in).get<UserProfile>();
            if (profile.user_id != item.path().stem().string()) {
                spdlog::warn("ignoring {}: user_id does not match file name", item.path().string());
                continue;
            }
            auto entry = std::make_unique<Entry>();
            entry->profile = std::move(profile);
            entries_.emplace(entry->profile.user_id, std::move(entry));
        } catch (const std::exception& e) {
            spdlog::warn("ignoring unreadable profile {}: {}", item.path().string(), e.what());
        }
    }
}

std::optional<UserProfile> ProfileStore::get(const std::string& user_id) const {
    std::shared_lock lock(map_mutex_);
    const auto it = entries_.find(user_id);
    if (it == entries_.end()) return std::nullopt;
    std::lock_guard entry_lock(it->second->mutex);
    return it->second->profile;
}

bool ProfileStore::contains(const std::string& user_id) const {
    std::shared_lock lock(map_mutex_);
    return entries_.contains(user_id);
}

void ProfileStore::create(const UserProfile& profile) {
    if (!valid_user_id(profile.user_id)) throw ValidationError("invalid user id '" + profile.user_id + "'");
    std::unique_lock lock(map_mutex_);
    if (entries_.contains(profile.user_id)) throw ValidationError("user '" + profile.user_id + "' already exists");
    persist(profile);
    auto entry = std::make_unique<Entry>();
    entry->profile = profile;
    entries_.emplace(profile.user_id, std::move(entry));
}

UserProfile ProfileStore::update(const std::string& user_id, const std::function<void(UserProfile&)>& mutation) {
    std::shared_lock lock(map_mutex_);
    const auto it = entries_.find(user_id);
    if (it == entries_.end()) throw NotFoundError("unknown user '" + user_id + "'");
    Entry& entry = *it->second;
    std::lock_guard entry_lock(entry.mutex);
    UserProfile updated = entry.profile;
    mutation(updated);
    updated.user_id = user_id;
    persist(updated);
    entry.profile = updated;
    return updated;
}

std::vector<UserProfile> ProfileStore::snapshot() const {
    std::shared_lock lock(map_mutex_);
    std::vector<UserProfile> out;
    out.reserve(entries_.size());
    for (const auto& [id, entry] : entries_) {
        std::lock_guard entry_lock(entry->mutex);
        out.push_back(entry->profile);
    }
    return out;
}

void ProfileStore::persist(const UserProfile& profile) const {
    write_file_atomically(directory_ / (profile.user_id + ".json"), nlohmann::json(profile).dump(2) + "\n");
}

}  // namespace feast
