#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "feast/engine.hpp"
#include "feast/evaluation.hpp"
#include "feast/profiles.hpp"

namespace feast {

enum class SeedPolicy { fixed, per_request };

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;  // 0 binds any free port
    std::filesystem::path data_dir = "data";
    // empty paths resolve to corpus.jsonl, dtm.txt, features.csv and
    // matrix.csv inside data_dir
    std::filesystem::path corpus_path;
    std::filesystem::path dtm_path;
    std::filesystem::path features_path;
    std::filesystem::path matrix_path;
    std::size_t top_n = 2100;
    std::size_t epochs = 7;
    std::size_t knn_n = 10;
    SeedPolicy seed_policy = SeedPolicy::fixed;
    std::uint64_t seed = 0;
    int pbkdf2_iterations = 100000;
    ElicitationPolicy policy;
    FsaThresholds fsa;
    HealthCutoffs cutoffs;

    [[nodiscard]] std::filesystem::path corpus_file() const;
    [[nodiscard]] std::filesystem::path dtm_file() const;
    [[nodiscard]] std::filesystem::path features_file() const;
    [[nodiscard]] std::filesystem::path matrix_file() const;
};

/// "host:port" into config.host / config.port; throws ConfigError.
void apply_listen(ServiceConfig& config, std::string_view listen);
/// An unsigned integer selects a fixed seed, "random" per-request seeds;
/// throws ConfigError otherwise.
void apply_seed(ServiceConfig& config, std::string_view seed);

/// Applies FEAST_DATA_DIR, FEAST_LISTEN (host:port) and FEAST_SEED (an
/// integer for a fixed seed, or "random" for per-request seeds).
/// Throws ConfigError on malformed values.
ServiceConfig config_from_env(ServiceConfig base = {});

/// HTTP front end over the engine, the profile store and the account store.
/// Artifacts are loaded and cross-checked once at construction.
class Service {
public:
    explicit Service(ServiceConfig config);
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds the listening socket and returns the port; throws IoError when
    /// the address is unavailable.
    int bind();
    /// Serves until stop(); requires bind().
    void run();
    void stop();

    [[nodiscard]] const Engine& engine() const;
    [[nodiscard]] const ServiceConfig& config() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// bind() then run().
void serve(const ServiceConfig& config);

}  // namespace feast
