#include "feast/accounts.hpp"

#include <fstream>
#include <vector>

#include <nlohmann/json.hpp>
#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/rand.h>

#include "feast/error.hpp"
#include "feast/profiles.hpp"

namespace feast {

namespace {

std::string to_hex(const unsigned char* data, std::size_t size) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(size * 2);
    for (std::size_t i = 0; i < size; ++i) {
        out.push_back(digits[data[i] >> 4]);
        out.push_back(digits[data[i] & 0x0f]);
    }
    return out;
}

}  // namespace

std::string hash_password(const std::string& password, const std::string& salt_hex, int iterations) {
    unsigned char key[32];
    if (PKCS5_PBKDF2_HMAC(password.data(), static_cast<int>(password.size()),
                          reinterpret_cast<const unsigned char*>(salt_hex.data()), static_cast<int>(salt_hex.size()),
                          iterations, EVP_sha256(), sizeof key, key) != 1) {
        throw Error("PBKDF2 failed");
    }
    return to_hex(key, sizeof key);
}

std::string random_hex(std::size_t bytes) {
    std::vector<unsigned char> buf(bytes);
    if (RAND_bytes(buf.data(), static_cast<int>(buf.size())) != 1) throw Error("RAND_bytes failed");
    return to_hex(buf.data(), buf.size());
}

AccountStore::AccountStore(std::filesystem::path directory, int pbkdf2_iterations)
    : directory_(std::move(directory)), iterations_(pbkdf2_iterations) {
    if (iterations_ < 1) throw ConfigError("PBKDF2 iterations must be positive");
    std::error_code ec;
    std::filesystem::create_directories(directory_, ec);
    if (ec || !std::filesystem::is_directory(directory_)) {
        throw IoError("cannot open account directory " + directory_.string());
    }
}

std::string AccountStore::register_account(const std::string& name, const std::string& password) {
    if (!valid_user_id(name)) throw ValidationError("invalid account name '" + name + "'");
    if (password.empty()) throw ValidationError("empty password");
    const std::string salt = random_hex(16);
    const nlohmann::json record{
        {"name", name}, {"salt", salt}, {"iterations", iterations_}, {"hash", hash_password(password, salt, iterations_)}};

    std::lock_guard lock(mutex_);
    const auto path = directory_ / (name + ".json");
    if (std::filesystem::exists(path)) throw ValidationError("account '" + name + "' already exists");
    write_file_atomically(path, record.dump(2) + "\n");
    return issue_token(name);
}

bool AccountStore::exists(const std::string& name) const {
    if (!valid_user_id(name)) return false;
    std::lock_guard lock(mutex_);
    return std::filesystem::exists(directory_ / (name + ".json"));
}

std::optional<std::string> AccountStore::login(const std::string& name, const std::string& password) {
    if (!valid_user_id(name)) return std::nullopt;
    nlohmann::json record;
    {
        std::lock_guard lock(mutex_);
        std::ifstream in(directory_ / (name + ".json"));
        if (!in) return std::nullopt;
        try {
            record = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception&) {
            return std::nullopt;
        }
    }
    const auto stored = record.value("hash", std::string{});
    const auto computed =
        hash_password(password, record.value("salt", std::string{}), record.value("iterations", iterations_));
    if (stored.size() != computed.size() || CRYPTO_memcmp(stored.data(), computed.data(), stored.size()) != 0) {
        return std::nullopt;
    }
    std::lock_guard lock(mutex_);
    return issue_token(name);
}

std::optional<std::string> AccountStore::authenticate(const std::string& token) const {
    std::lock_guard lock(mutex_);
    const auto it = tokens_.find(token);
    if (it == tokens_.end()) return std::nullopt;
    return it->second;
}

std::string AccountStore::issue_token(const std::string& name) {
    std::string token = random_hex(32);
    tokens_.emplace(token, name);
    return token;
}

}  // namespace feast
