#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

namespace feast {

/// PBKDF2-HMAC-SHA256 of `password` with `salt`, hex encoded.
std::string hash_password(const std::string& password, const std::string& salt_hex, int iterations);

/// `bytes` bytes from the OpenSSL CSPRNG, hex encoded.
std::string random_hex(std::size_t bytes);

/// Login names with salted password hashes (one JSON file per account) and
/// in-memory bearer tokens. Thread-safe.
class AccountStore {
public:
    explicit AccountStore(std::filesystem::path directory, int pbkdf2_iterations = 100000);

    AccountStore(const AccountStore&) = delete;
    AccountStore& operator=(const AccountStore&) = delete;

    /// Stores the account and returns a fresh token. Throws ValidationError for
    /// a taken or invalid name or an empty password.
    std::string register_account(const std::string& name, const std::string& password);

    [[nodiscard]] bool exists(const std::string& name) const;

    /// A new token when the password matches, otherwise nullopt.
    std::optional<std::string> login(const std::string& name, const std::string& password);

    /// Account name the token was issued to.
    [[nodiscard]] std::optional<std::string> authenticate(const std::string& token) const;

private:
    std::string issue_token(const std::string& name);

    std::filesystem::path directory_;
    int iterations_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, std::string> tokens_;
};

}  // namespace feast
