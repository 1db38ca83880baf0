#include "feast/service.hpp"

#include <charconv>
#include <cstdlib>
#include <random>
#include <unordered_map>

#include <httplib.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "feast/accounts.hpp"
#include "feast/corpus.hpp"
#include "feast/error.hpp"

namespace feast {

using nlohmann::json;

namespace {

std::filesystem::path or_default(const std::filesystem::path& p, const std::filesystem::path& dir, const char* name) {
    return p.empty() ? dir / name : p;
}

template <typename T>
std::optional<T> parse_number(std::string_view text) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
    send_json(res, status, json{{"error", message}});
}

}  // namespace

std::filesystem::path ServiceConfig::corpus_file() const { return or_default(corpus_path, data_dir, "corpus.jsonl"); }
std::filesystem::path ServiceConfig::dtm_file() const { return or_default(dtm_path, data_dir, "dtm.txt"); }
std::filesystem::path ServiceConfig::features_file() const { return or_default(features_path, data_dir, "features.csv"); }
std::filesystem::path ServiceConfig::matrix_file() const { return or_default(matrix_path, data_dir, "matrix.csv"); }

void apply_listen(ServiceConfig& config, std::string_view text) {
    const auto colon = text.rfind(':');
    if (colon == std::string_view::npos) throw ConfigError("listen address must be host:port, got '" + std::string(text) + "'");
    const auto port = parse_number<int>(text.substr(colon + 1));
    if (!port || *port < 0 || *port > 65535) throw ConfigError("bad port in '" + std::string(text) + "'");
    config.host = std::string(text.substr(0, colon));
    config.port = *port;
}

void apply_seed(ServiceConfig& config, std::string_view text) {
    if (text == "random") {
        config.seed_policy = SeedPolicy::per_request;
    } else if (const auto value = parse_number<std::uint64_t>(text)) {
        config.seed_policy = SeedPolicy::fixed;
        config.seed = *value;
    } else {
        throw ConfigError("seed must be an unsigned integer or 'random', got '" + std::string(text) + "'");
    }
}

ServiceConfig config_from_env(ServiceConfig base) {
    if (const char* dir = std::getenv("FEAST_DATA_DIR"); dir && *dir) base.data_dir = dir;
    if (const char* listen = std::getenv("FEAST_LISTEN"); listen && *listen) apply_listen(base, listen);
    if (const char* seed = std::getenv("FEAST_SEED"); seed && *seed) apply_seed(base, seed);
    return base;
}

struct Service::Impl {
    ServiceConfig config;
    Engine engine;
    std::vector<RecipeDocument> documents;
    std::unordered_map<std::string, std::size_t> document_index;
    std::unordered_map<std::string, int> health_scores;
    ProfileStore profiles;
    AccountStore accounts;
    httplib::Server server;
    int port = -1;

    explicit Impl(ServiceConfig cfg)
        : config(std::move(cfg)),
          engine(load_engine(config.dtm_file(), config.features_file(), config.matrix_file())),
          profiles(config.data_dir / "profiles"),
          accounts(config.data_dir / "accounts", config.pbkdf2_iterations) {
        IngestResult corpus = ingest_corpus(config.corpus_file(), CorpusFormat::jsonl);
        documents = std::move(corpus.documents);
        for (std::size_t i = 0; i < documents.size(); ++i) document_index.emplace(documents[i].id, i);
        for (const auto& id : engine.recipe_ids()) {
            if (!document_index.contains(id)) {
                throw ArtifactMismatchError("recipe '" + id + "' of the matrix is missing from " +
                                            config.corpus_file().string());
            }
        }
        if (config.epochs == 0 || config.top_n == 0 || config.top_n % config.epochs != 0) {
            throw ConfigError("top_n must be a positive multiple of epochs");
        }
        if (config.knn_n == 0) throw ConfigError("knn_n must be positive");
        health_scores = recipe_health_scores(documents, config.fsa);
        routes();
        spdlog::info("service ready: {} recipes, {} features, {} profiles", engine.recipe_ids().size(),
                     engine.features().size(), profiles.snapshot().size());
    }

    // Name of the account behind the bearer token, if it matches `user_id`.
    bool authorized(const httplib::Request& req, const std::string& user_id) const {
        const auto header = req.get_header_value("Authorization");
        constexpr std::string_view prefix = "Bearer ";
        if (header.size() <= prefix.size() || header.compare(0, prefix.size(), prefix) != 0) return false;
        const auto name = accounts.authenticate(header.substr(prefix.size()));
        return name && *name == user_id;
    }

    // Runs `fn` for a known, authenticated user; answers 404/401 otherwise.
    template <typename Fn>
    void with_user(const httplib::Request& req, httplib::Response& res, Fn&& fn) {
        const std::string user_id = req.matches[1];
        if (!profiles.contains(user_id)) return send_error(res, 404, "unknown user '" + user_id + "'");
        if (!authorized(req, user_id)) return send_error(res, 401, "missing or invalid bearer token");
        fn(user_id);
    }

    static std::optional<json> parse_body(const httplib::Request& req, httplib::Response& res) {
        try {
            auto body = json::parse(req.body);
            if (!body.is_object()) {
                send_error(res, 400, "request body must be a JSON object");
                return std::nullopt;
            }
            return body;
        } catch (const json::exception&) {
            send_error(res, 400, "request body is not valid JSON");
            return std::nullopt;
        }
    }

    template <typename T>
    static std::optional<T> query_number(const httplib::Request& req, const char* key, T fallback, bool& ok) {
        if (!req.has_param(key)) return fallback;
        const auto value = parse_number<T>(req.get_param_value(key));
        if (!value) ok = false;
        return value;
    }

    json recipe_card(const RecItem& item) const {
        const auto& doc = documents[document_index.at(item.recipe_id)];
        json terms = json::array();
        for (const auto& [f, value] : recipe_features(engine.matrix(), item.recipe_id)) {
            if (value > 0.0) terms.push_back(engine.features()[f].term);
        }
        return json{{"recipe_id", item.recipe_id}, {"title", doc.title},  {"image", doc.image_present},
                    {"features", terms},           {"score", item.score}, {"epoch", item.epoch},
                    {"rank", item.rank}};
    }

    void routes() {
        server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
            try {
                std::rethrow_exception(ep);
            } catch (const std::exception& e) {
                spdlog::error("request failed: {}", e.what());
                send_error(res, 500, e.what());
            } catch (...) {
                send_error(res, 500, "internal error");
            }
        });

        server.Post("/users", [this](const httplib::Request& req, httplib::Response& res) {
            const auto body = parse_body(req, res);
            if (!body) return;
            if (!body->contains("name") || !(*body)["name"].is_string() || !body->contains("password") ||
                !(*body)["password"].is_string()) {
                return send_error(res, 400, "name and password are required strings");
            }
            const auto name = (*body)["name"].get<std::string>();
            const auto password = (*body)["password"].get<std::string>();
            if (!valid_user_id(name)) return send_error(res, 400, "name must be 1-64 characters of [A-Za-z0-9_-]");
            if (password.empty()) return send_error(res, 400, "password must not be empty");

            UserProfile profile;
            profile.user_id = name;
            try {
                if (auto d = body->find("demographics"); d != body->end() && !d->is_null()) {
                    profile.demographics = d->get<Demographics>();
                }
            } catch (const std::exception& e) {
                return send_error(res, 400, std::string("bad demographics: ") + e.what());
            }
            if (accounts.exists(name) || profiles.contains(name)) return send_error(res, 409, "name already taken");
            std::string token;
            try {
                token = accounts.register_account(name, password);
                profiles.create(profile);
            } catch (const ValidationError& e) {
                return send_error(res, 409, e.what());
            }
            send_json(res, 201, json{{"user_id", name}, {"token", token}});
        });

        server.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
            const auto body = parse_body(req, res);
            if (!body) return;
            if (!body->contains("name") || !(*body)["name"].is_string() || !body->contains("password") ||
                !(*body)["password"].is_string()) {
                return send_error(res, 400, "name and password are required strings");
            }
            const auto token = accounts.login((*body)["name"].get<std::string>(), (*body)["password"].get<std::string>());
            if (!token) return send_error(res, 401, "unknown name or wrong password");
            send_json(res, 200, json{{"token", *token}});
        });

        server.Get("/features", [this](const httplib::Request&, httplib::Response& res) {
            json out = json::array();
            const auto& features = engine.features();
            for (std::size_t i = 0; i < features.size(); ++i) {
                out.push_back(json{{"index", i}, {"term", features[i].term}, {"weight", features[i].weight}});
            }
            send_json(res, 200, out);
        });

        server.Put(R"(/users/([A-Za-z0-9_-]+)/preferences)", [this](const httplib::Request& req, httplib::Response& res) {
            with_user(req, res, [&](const std::string& user_id) {
                const auto body = parse_body(req, res);
                if (!body) return;
                const auto index = body->find("feature_index");
                const auto verdict_field = body->find("verdict");
                if (index == body->end() || !index->is_number_unsigned() || verdict_field == body->end() ||
                    !verdict_field->is_string()) {
                    return send_error(res, 400, "feature_index (non-negative integer) and verdict are required");
                }
                const auto verdict = parse_verdict(verdict_field->get<std::string>());
                if (!verdict) return send_error(res, 400, "verdict must be like, dislike or clear");
                try {
                    profiles.update(user_id, [&](UserProfile& p) {
                        set_preference(p, index->get<std::size_t>(), *verdict, engine.features().size());
                    });
                } catch (const ValidationError& e) {
                    return send_error(res, 400, e.what());
                }
                res.status = 204;
            });
        });

        server.Get(R"(/users/([A-Za-z0-9_-]+)/profile)", [this](const httplib::Request& req, httplib::Response& res) {
            with_user(req, res, [&](const std::string& user_id) {
                const auto profile = profiles.get(user_id);
                json out = *profile;
                out["policy"] = validate_profile(*profile, config.policy);
                send_json(res, 200, out);
            });
        });

        server.Get(R"(/users/([A-Za-z0-9_-]+)/recommendations)",
                   [this](const httplib::Request& req, httplib::Response& res) {
                       with_user(req, res, [&](const std::string& user_id) { recommendations(req, res, user_id); });
                   });

        server.Post(R"(/users/([A-Za-z0-9_-]+)/ratings)", [this](const httplib::Request& req, httplib::Response& res) {
            with_user(req, res, [&](const std::string& user_id) {
                const auto body = parse_body(req, res);
                if (!body) return;
                const auto recipe = body->find("recipe_id");
                const auto stars = body->find("stars");
                if (recipe == body->end() || !recipe->is_string() || stars == body->end() || !stars->is_number_integer()) {
                    return send_error(res, 400, "recipe_id (string) and stars (integer) are required");
                }
                const auto recipe_id = recipe->get<std::string>();
                if (!document_index.contains(recipe_id)) return send_error(res, 404, "unknown recipe '" + recipe_id + "'");
                try {
                    profiles.update(user_id, [&](UserProfile& p) { rate_recipe(p, recipe_id, stars->get<int>()); });
                } catch (const ValidationError& e) {
                    return send_error(res, 400, e.what());
                }
                res.status = 204;
            });
        });

        server.Get(R"(/recipes/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
            const std::string id = req.matches[1];
            const auto it = document_index.find(id);
            if (it == document_index.end()) return send_error(res, 404, "unknown recipe '" + id + "'");
            send_json(res, 200, json(documents[it->second]));
        });

        server.Get("/reports/coverage", [this](const httplib::Request& req, httplib::Response& res) {
            const auto name = req.has_param("strategy") ? req.get_param_value("strategy") : std::string("ffbr");
            const auto strategy = parse_strategy(name);
            if (!strategy) return send_error(res, 400, "unknown strategy '" + name + "'");
            const auto population = profiles.snapshot();
            if (population.empty()) return send_error(res, 409, "no user profiles to evaluate");
            std::vector<Prediction> all;
            for (const auto& user : population) {
                auto batch = engine.predict(user, *strategy, population, config.knn_n);
                all.insert(all.end(), std::make_move_iterator(batch.begin()), std::make_move_iterator(batch.end()));
            }
            send_json(res, 200, json(coverage(all, *strategy)));
        });

        server.Get("/reports/correlations", [this](const httplib::Request& req, httplib::Response& res) {
            std::vector<HealthScale> scales = {HealthScale::activity_level, HealthScale::food_health_class};
            if (req.has_param("scale")) {
                const auto name = req.get_param_value("scale");
                const auto scale = parse_health_scale(name);
                if (!scale) return send_error(res, 400, "scale must be activity_level or food_health_class");
                scales = {*scale};
            }
            const auto population = profiles.snapshot();
            std::vector<HealthGroups> groups;
            groups.reserve(population.size());
            for (const auto& user : population) {
                groups.push_back(classify_user(user, avg_food_health_score(user, health_scores), config.cutoffs));
            }
            const auto table = feature_health_correlations(population, groups, engine.features(), scales);
            send_json(res, 200,
                      json{{"alpha", table.alpha}, {"rows", table.rows}, {"significant", table.significant()}});
        });
    }

    void recommendations(const httplib::Request& req, httplib::Response& res, const std::string& user_id) {
        const auto name = req.has_param("strategy") ? req.get_param_value("strategy") : std::string("ffbr");
        const auto strategy = parse_strategy(name);
        if (!strategy) return send_error(res, 400, "unknown strategy '" + name + "'");

        bool ok = true;
        RecommendOptions options;
        options.knn_n = config.knn_n;
        options.top_n = query_number<std::size_t>(req, "top_n", config.top_n, ok).value_or(0);
        options.epochs = query_number<std::size_t>(req, "epochs", config.epochs, ok).value_or(0);
        std::uint64_t fallback_seed = config.seed;
        if (config.seed_policy == SeedPolicy::per_request) fallback_seed = std::random_device{}();
        options.seed = query_number<std::uint64_t>(req, "seed", fallback_seed, ok).value_or(0);
        if (!ok) return send_error(res, 400, "top_n, epochs and seed must be non-negative integers");

        const auto population = profiles.snapshot();
        const auto user = std::find_if(population.begin(), population.end(),
                                       [&](const UserProfile& p) { return p.user_id == user_id; });
        if (user == population.end()) return send_error(res, 404, "unknown user '" + user_id + "'");
        const PolicyReport report = validate_profile(*user, config.policy);
        if (!report.ok) {
            return send_json(res, 409, json{{"error", "not enough feature preferences"}, {"policy", report}});
        }
        RecList list;
        try {
            list = engine.recommend(*user, *strategy, population, options);
        } catch (const ParameterError& e) {
            return send_error(res, 400, e.what());
        } catch (const InsufficientCandidatesError& e) {
            return send_error(res, 409, e.what());
        }
        json out = list;
        json cards = json::array();
        for (const auto& item : list.items) cards.push_back(recipe_card(item));
        out["items"] = std::move(cards);
        send_json(res, 200, out);
    }
};

Service::Service(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

Service::~Service() { stop(); }

int Service::bind() {
    auto& cfg = impl_->config;
    if (cfg.port == 0) {
        impl_->port = impl_->server.bind_to_any_port(cfg.host);
    } else if (impl_->server.bind_to_port(cfg.host, cfg.port)) {
        impl_->port = cfg.port;
    } else {
        impl_->port = -1;
    }
    if (impl_->port < 0) throw IoError("cannot listen on " + cfg.host + ":" + std::to_string(cfg.port));
    return impl_->port;
}

void Service::run() {
    if (impl_->port < 0) throw IoError("service is not bound");
    spdlog::info("listening on {}:{}", impl_->config.host, impl_->port);
    impl_->server.listen_after_bind();
}

void Service::stop() {
    if (impl_) impl_->server.stop();
}

const Engine& Service::engine() const { return impl_->engine; }
const ServiceConfig& Service::config() const { return impl_->config; }

void serve(const ServiceConfig& config) {
    Service service(config);
    service.bind();
    service.run();
}

}  // namespace feast
