// feast: command-line front end for the recipe feature pipeline.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "feast/corpus.hpp"
#include "feast/engine.hpp"
#include "feast/enstm.hpp"
#include "feast/error.hpp"
#include "feast/evaluation.hpp"
#include "feast/featurespace.hpp"
#include "feast/profiles.hpp"
#include "feast/service.hpp"
#include "feast/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace feast;

namespace {

void write_text(const fs::path& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::size_t feature_ref(const FeatureSet& features, const std::string& ref) {
    if (const auto idx = features.index_of(ref)) return *idx;
    try {
        std::size_t used = 0;
        const auto value = std::stoul(ref, &used);
        if (used == ref.size() && value < features.size()) return value;
    } catch (const std::logic_error&) {
    }
    throw ValidationError("'" + ref + "' is neither a feature term nor a feature index");
}

struct Artifacts {
    std::string dtm = "dtm.txt";
    std::string features = "features.csv";
    std::string matrix = "matrix.csv";

    void add_to(CLI::App* app) {
        app->add_option("--dtm", dtm, "document-term matrix file")->capture_default_str();
        app->add_option("--features", features, "feature CSV")->capture_default_str();
        app->add_option("--matrix", matrix, "recipe-feature matrix file")->capture_default_str();
    }
    [[nodiscard]] Engine load() const { return load_engine(dtm, features, matrix); }
};

std::vector<UserProfile> load_profiles(const std::string& dir) { return ProfileStore(dir).snapshot(); }

const UserProfile& find_user(const std::vector<UserProfile>& population, const std::string& id) {
    for (const auto& p : population) {
        if (p.user_id == id) return p;
    }
    throw NotFoundError("unknown user '" + id + "'");
}

std::vector<Strategy> strategies_of(const std::string& name) {
    if (name == "all") return {kAllStrategies.begin(), kAllStrategies.end()};
    const auto s = parse_strategy(name);
    if (!s) throw ValidationError("unknown strategy '" + name + "'");
    return {*s};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"feast: food-feature recipe recommendation"};
    app.require_subcommand(1);
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "debug logging");

    // synth
    auto* synth = app.add_subcommand("synth", "write a synthetic recipe corpus (jsonl)");
    SyntheticCorpusOptions synth_opts;
    std::string synth_out = "corpus.jsonl";
    synth->add_option("--recipes", synth_opts.recipes)->capture_default_str();
    synth->add_option("--seed", synth_opts.seed)->capture_default_str();
    synth->add_option("--meat-fraction", synth_opts.meat_fraction)->capture_default_str();
    synth->add_option("--fish-fraction", synth_opts.fish_fraction)->capture_default_str();
    synth->add_option("--vegan-fraction", synth_opts.vegan_fraction)->capture_default_str();
    synth->add_option("--out", synth_out)->capture_default_str();

    // ingest
    auto* ingest = app.add_subcommand("ingest", "build the document-term matrix");
    std::string ingest_input;
    std::string ingest_format = "jsonl";
    std::string ingest_out = "dtm.txt";
    std::string ingest_corpus_out;
    DtmOptions dtm_opts;
    ingest->add_option("--input", ingest_input)->required();
    ingest->add_option("--format", ingest_format)->check(CLI::IsMember({"jsonl", "textdir"}))->capture_default_str();
    ingest->add_option("--min-df", dtm_opts.min_df)->capture_default_str();
    ingest->add_option("--max-df", dtm_opts.max_df_fraction, "maximum document-frequency fraction")->capture_default_str();
    ingest->add_option("--out", ingest_out)->capture_default_str();
    ingest->add_option("--corpus-out", ingest_corpus_out, "also write the accepted recipes as jsonl");

    // extract
    auto* extract = app.add_subcommand("extract", "ensemble NMF feature extraction");
    EnsembleConfig ens;
    std::string extract_dtm = "dtm.txt";
    std::string extract_out = "features.csv";
    extract->add_option("--dtm", extract_dtm)->capture_default_str();
    extract->add_option("--runs", ens.runs)->capture_default_str();
    extract->add_option("--k", ens.k_base, "topics per base run")->capture_default_str();
    extract->add_option("--k-final", ens.k_final, "consensus topics")->capture_default_str();
    extract->add_option("--top-topics", ens.top_topics)->capture_default_str();
    extract->add_option("--top-terms", ens.top_terms)->capture_default_str();
    extract->add_option("--seed", ens.base_seed)->capture_default_str();
    extract->add_option("--max-iters", ens.max_iters)->capture_default_str();
    extract->add_option("--tolerance", ens.tolerance)->capture_default_str();
    extract->add_option("--threads", ens.threads, "0 = hardware concurrency")->capture_default_str();
    extract->add_option("--out", extract_out)->capture_default_str();

    // project
    auto* project = app.add_subcommand("project", "project recipes onto the feature set");
    std::string project_dtm = "dtm.txt";
    std::string project_features = "features.csv";
    std::string project_out = "matrix.csv";
    project->add_option("--dtm", project_dtm)->capture_default_str();
    project->add_option("--features", project_features)->capture_default_str();
    project->add_option("--out", project_out)->capture_default_str();

    // profile
    auto* profile = app.add_subcommand("profile", "create or edit a user profile");
    std::string profile_dir = "profiles";
    std::string profile_user;
    std::string profile_features = "features.csv";
    std::vector<std::string> likes, dislikes, clears, ratings;
    std::optional<double> height, weight;
    std::string activity;
    profile->add_option("--profiles", profile_dir)->capture_default_str();
    profile->add_option("--user", profile_user)->required();
    profile->add_option("--features", profile_features)->capture_default_str();
    profile->add_option("--like", likes, "feature terms or indices");
    profile->add_option("--dislike", dislikes, "feature terms or indices");
    profile->add_option("--clear", clears, "feature terms or indices");
    profile->add_option("--rate", ratings, "recipe_id=stars");
    profile->add_option("--height", height, "metres");
    profile->add_option("--weight", weight, "kilograms");
    profile->add_option("--activity", activity)
        ->check(CLI::IsMember({"sedentary", "lightly_active", "moderately_active", "extra_active"}));

    // recommend
    auto* recommend = app.add_subcommand("recommend", "print a recommendation list as JSON");
    Artifacts rec_art;
    rec_art.add_to(recommend);
    std::string rec_profiles = "profiles";
    std::string rec_user;
    std::string rec_strategy = "ffbr";
    RecommendOptions rec_opts;
    recommend->add_option("--profiles", rec_profiles)->capture_default_str();
    recommend->add_option("--user", rec_user)->required();
    recommend->add_option("--strategy", rec_strategy)->check(CLI::IsMember({"ffbr", "wffbr", "ffbcf", "cb"}))->capture_default_str();
    recommend->add_option("--top-n", rec_opts.top_n)->capture_default_str();
    recommend->add_option("--epochs", rec_opts.epochs)->capture_default_str();
    recommend->add_option("--seed", rec_opts.seed)->capture_default_str();
    recommend->add_option("--knn", rec_opts.knn_n)->capture_default_str();

    // eval
    auto* eval = app.add_subcommand("eval", "evaluation reports");
    eval->require_subcommand(1);
    Artifacts eval_art;
    std::string eval_profiles = "profiles";
    std::string eval_out = "-";
    std::string eval_corpus = "corpus.jsonl";
    std::string eval_strategy = "all";
    std::string eval_practices_file;
    std::string eval_fsa_file;
    std::string eval_cutoffs_file;
    std::string eval_csv;
    std::string eval_scale = "all";
    RecommendOptions eval_opts;
    std::size_t eval_draws = 100;
    auto add_common = [&](CLI::App* sub) {
        eval_art.add_to(sub);
        sub->add_option("--profiles", eval_profiles)->capture_default_str();
        sub->add_option("--out", eval_out, "report file ('-' for stdout)")->capture_default_str();
    };
    auto* eval_coverage = eval->add_subcommand("coverage", "share of user x recipe pairs with a prediction");
    add_common(eval_coverage);
    eval_coverage->add_option("--strategy", eval_strategy)->capture_default_str();
    eval_coverage->add_option("--knn", eval_opts.knn_n)->capture_default_str();

    auto* eval_practices = eval->add_subcommand("practices", "food-practice violations in recommendation lists");
    add_common(eval_practices);
    eval_practices->add_option("--practices", eval_practices_file, "JSON practice definitions");
    eval_practices->add_option("--strategy", eval_strategy)->capture_default_str();
    eval_practices->add_option("--draws", eval_draws, "seeded lists per user and strategy")->capture_default_str();
    eval_practices->add_option("--top-n", eval_opts.top_n)->capture_default_str();
    eval_practices->add_option("--epochs", eval_opts.epochs)->capture_default_str();
    eval_practices->add_option("--seed", eval_opts.seed, "first seed")->capture_default_str();
    eval_practices->add_option("--knn", eval_opts.knn_n)->capture_default_str();

    auto* eval_health = eval->add_subcommand("health", "FSA scores and health groups per user");
    add_common(eval_health);
    eval_health->add_option("--corpus", eval_corpus)->capture_default_str();
    eval_health->add_option("--fsa", eval_fsa_file, "JSON FSA band table");
    eval_health->add_option("--cutoffs", eval_cutoffs_file, "JSON BMI/food-health cutoffs");

    auto* eval_corr = eval->add_subcommand("correlations", "feature / health-group Spearman table");
    add_common(eval_corr);
    eval_corr->add_option("--corpus", eval_corpus)->capture_default_str();
    eval_corr->add_option("--fsa", eval_fsa_file, "JSON FSA band table");
    eval_corr->add_option("--cutoffs", eval_cutoffs_file, "JSON BMI/food-health cutoffs");
    eval_corr->add_option("--scale", eval_scale)
        ->check(CLI::IsMember({"all", "activity_level", "food_health_class"}))
        ->capture_default_str();
    eval_corr->add_option("--csv", eval_csv, "also write the table as CSV");

    // serve
    auto* serve_cmd = app.add_subcommand("serve", "run the HTTP service");
    ServiceConfig svc;
    std::string listen;
    std::string seed_text;
    std::string data_dir;
    serve_cmd->add_option("--data-dir", data_dir, "default: $FEAST_DATA_DIR or ./data");
    serve_cmd->add_option("--listen", listen, "host:port, default: $FEAST_LISTEN or 127.0.0.1:8080");
    serve_cmd->add_option("--seed", seed_text, "integer (fixed) or 'random' (per request); default: $FEAST_SEED or 0");
    serve_cmd->add_option("--top-n", svc.top_n)->capture_default_str();
    serve_cmd->add_option("--epochs", svc.epochs)->capture_default_str();
    serve_cmd->add_option("--knn", svc.knn_n)->capture_default_str();
    serve_cmd->add_option("--min-likes", svc.policy.min_likes)->capture_default_str();
    serve_cmd->add_option("--min-dislikes", svc.policy.min_dislikes)->capture_default_str();

    CLI11_PARSE(app, argc, argv);
    // stdout carries JSON output
    spdlog::set_default_logger(spdlog::stderr_color_mt("feast"));
    if (verbose) spdlog::set_level(spdlog::level::debug);

    try {
        if (*synth) {
            const auto recipes = generate_corpus(synth_opts);
            write_jsonl(documents_of(recipes), synth_out);
            spdlog::info("wrote {} recipes to {}", recipes.size(), synth_out);
        } else if (*ingest) {
            IngestResult result = ingest_corpus(ingest_input, parse_corpus_format(ingest_format));
            spdlog::info("ingested {} of {} records ({} skipped)", result.documents.size(), result.total, result.skipped);
            const auto dtm = build_dtm(result.documents, default_stoplist(), dtm_opts);
            save_dtm(dtm, ingest_out);
            if (!ingest_corpus_out.empty()) write_jsonl(result.documents, ingest_corpus_out);
            spdlog::info("dtm: {} docs x {} terms -> {}", dtm.num_docs(), dtm.num_terms(), ingest_out);
        } else if (*extract) {
            const auto dtm = load_dtm(extract_dtm);
            const auto weights = tfidf(dtm);
            const auto ttm = run_ensemble(weights.values, dtm.terms, ens);
            const auto features = extract_features(ttm, ens.top_topics, ens.top_terms);
            save_features(features, extract_out);
            spdlog::info("{} features -> {}", features.size(), extract_out);
        } else if (*project) {
            const auto dtm = load_dtm(project_dtm);
            const auto weights = tfidf(dtm);
            const auto features = load_features(project_features);
            const auto matrix = project_corpus(weights.values, dtm.docs, dtm.terms, features);
            save_matrix(matrix, project_out);
            spdlog::info("{} recipes x {} features -> {}", matrix.num_recipes(), matrix.num_features(), project_out);
        } else if (*profile) {
            ProfileStore store(profile_dir);
            const auto features = load_features(profile_features);
            if (!store.contains(profile_user)) {
                UserProfile fresh;
                fresh.user_id = profile_user;
                store.create(fresh);
            }
            const auto updated = store.update(profile_user, [&](UserProfile& p) {
                for (const auto& ref : likes) set_preference(p, feature_ref(features, ref), Verdict::like, features.size());
                for (const auto& ref : dislikes) {
                    set_preference(p, feature_ref(features, ref), Verdict::dislike, features.size());
                }
                for (const auto& ref : clears) set_preference(p, feature_ref(features, ref), Verdict::clear, features.size());
                for (const auto& r : ratings) {
                    const auto eq = r.rfind('=');
                    if (eq == std::string::npos) throw ValidationError("--rate expects recipe_id=stars, got '" + r + "'");
                    int stars = -1;
                    try {
                        stars = std::stoi(r.substr(eq + 1));
                    } catch (const std::logic_error&) {
                        throw ValidationError("bad star count in '" + r + "'");
                    }
                    rate_recipe(p, r.substr(0, eq), stars);
                }
                if (height || weight || !activity.empty()) {
                    Demographics d = p.demographics.value_or(Demographics{});
                    if (height) d.height_m = *height;
                    if (weight) d.weight_kg = *weight;
                    if (!activity.empty()) d.activity_level = parse_activity_level(activity);
                    p.demographics = d;
                }
            });
            json out = updated;
            out["policy"] = validate_profile(updated, ElicitationPolicy{});
            write_json("-", out);
        } else if (*recommend) {
            const Engine engine = rec_art.load();
            const auto population = load_profiles(rec_profiles);
            const auto& user = find_user(population, rec_user);
            const auto report = validate_profile(user, ElicitationPolicy{});
            if (!report.ok) {
                spdlog::warn("user '{}' is short of {} likes and {} dislikes", user.user_id, report.missing_likes,
                             report.missing_dislikes);
            }
            const auto list = engine.recommend(user, *parse_strategy(rec_strategy), population, rec_opts);
            write_json("-", json(list));
        } else if (*eval) {
            const Engine engine = eval_art.load();
            const auto population = load_profiles(eval_profiles);
            if (*eval_coverage) {
                if (population.empty()) throw ValidationError("no profiles in " + eval_profiles);
                json reports = json::array();
                for (const Strategy s : strategies_of(eval_strategy)) {
                    std::vector<Prediction> all;
                    for (const auto& user : population) {
                        auto batch = engine.predict(user, s, population, eval_opts.knn_n);
                        all.insert(all.end(), batch.begin(), batch.end());
                    }
                    reports.push_back(json(coverage(all, s)));
                }
                write_json(eval_out, reports);
            } else if (*eval_practices) {
                const auto practices = eval_practices_file.empty()
                                           ? default_food_practices(engine.features())
                                           : load_food_practices(eval_practices_file, engine.features());
                json users = json::array();
                for (const auto& user : population) {
                    for (const auto& [name, practice] : practices) {
                        if (!follows_practice(user, practice, engine.features())) continue;
                        json per_strategy = json::object();
                        for (const Strategy s : strategies_of(eval_strategy)) {
                            const auto ranked = Engine::rank(engine.predict(user, s, population, eval_opts.knn_n));
                            std::size_t lists_with_violation = 0;
                            std::size_t violations = 0;
                            for (std::size_t d = 0; d < eval_draws; ++d) {
                                auto list = build_reclist(ranked, eval_opts.top_n, eval_opts.epochs, eval_opts.seed + d);
                                const auto v = check_food_practice(list, practice, engine.matrix(), engine.features());
                                violations += v.size();
                                if (!v.empty()) ++lists_with_violation;
                            }
                            per_strategy[std::string(to_string(s))] =
                                json{{"lists", eval_draws}, {"lists_with_violation", lists_with_violation},
                                     {"violations", violations}};
                        }
                        users.push_back(json{{"user_id", user.user_id}, {"practice", name}, {"strategies", per_strategy}});
                    }
                }
                write_json(eval_out, users);
            } else {
                const FsaThresholds fsa = eval_fsa_file.empty() ? FsaThresholds{} : load_fsa_thresholds(eval_fsa_file);
                HealthCutoffs cutoffs;
                if (!eval_cutoffs_file.empty()) {
                    std::ifstream in(eval_cutoffs_file);
                    if (!in) throw IoError("cannot read " + eval_cutoffs_file);
                    cutoffs = json::parse(in).get<HealthCutoffs>();
                }
                const auto corpus = ingest_corpus(eval_corpus, CorpusFormat::jsonl);
                const auto scores = recipe_health_scores(corpus.documents, fsa);
                std::vector<HealthGroups> groups;
                json users = json::array();
                for (const auto& user : population) {
                    const auto avg = avg_food_health_score(user, scores);
                    groups.push_back(classify_user(user, avg, cutoffs));
                    users.push_back(json{{"user_id", user.user_id},
                                         {"avg_food_health_score", avg ? json(*avg) : json(nullptr)},
                                         {"groups", groups.back()}});
                }
                if (*eval_health) {
                    write_json(eval_out, users);
                } else {
                    std::vector<HealthScale> scales = {HealthScale::activity_level, HealthScale::food_health_class};
                    if (eval_scale != "all") scales = {*parse_health_scale(eval_scale)};
                    const auto table = feature_health_correlations(population, groups, engine.features(), scales);
                    write_json(eval_out, json{{"alpha", table.alpha}, {"rows", table.rows}, {"significant", table.significant()}});
                    if (!eval_csv.empty()) write_text(eval_csv, correlations_to_csv(table.rows));
                }
            }
        } else if (*serve_cmd) {
            svc = config_from_env(svc);
            if (!data_dir.empty()) svc.data_dir = data_dir;
            if (!listen.empty()) apply_listen(svc, listen);
            if (!seed_text.empty()) apply_seed(svc, seed_text);
            serve(svc);
        }
    } catch (const Error& e) {
        spdlog::error("{}", e.what());
        return 1;
    } catch (const std::exception& e) {
        spdlog::error("unexpected failure: {}", e.what());
        return 2;
    }
    return 0;
}
