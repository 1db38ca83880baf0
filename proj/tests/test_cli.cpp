#include <doctest.h>

#include <array>
#include <cstdio>
#include <set>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "support/support.hpp"

using nlohmann::json;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

// Runs the CLI inside `dir`; stderr (logging) is discarded.
Run feast_cli(const std::filesystem::path& dir, const std::string& args) {
    const std::string cmd = "cd '" + dir.string() + "' && '" FEAST_CLI_PATH "' " + args + " 2>/dev/null";
    Run run;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) run.out.append(buf.data(), n);
    const int raw = ::pclose(pipe);
    run.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return run;
}

std::string indices(std::size_t from, std::size_t to) {
    std::string s;
    for (std::size_t i = from; i < to; ++i) s += " " + std::to_string(i);
    return s;
}

}  // namespace

TEST_CASE("command line pipeline from corpus to reports") {
    feast::test::TempDir dir;
    const auto& d = dir.path();

    REQUIRE(feast_cli(d, "synth --recipes 200 --seed 3 --out raw.jsonl").status == 0);
    REQUIRE(feast_cli(d, "ingest --input raw.jsonl --corpus-out corpus.jsonl").status == 0);
    REQUIRE(feast_cli(d, "extract --runs 2 --k 12 --k-final 12 --top-topics 12 --top-terms 10 --max-iters 60").status ==
            0);
    REQUIRE(feast_cli(d, "project").status == 0);
    CHECK(std::filesystem::exists(d / "dtm.txt"));
    CHECK(std::filesystem::exists(d / "features.csv"));
    CHECK(std::filesystem::exists(d / "matrix.csv"));

    auto run = feast_cli(d, "profile --user ann --like" + indices(0, 20) + " --dislike" + indices(20, 40) +
                                " --height 1.7 --weight 60 --activity lightly_active");
    REQUIRE(run.status == 0);
    auto profile = json::parse(run.out);
    CHECK(profile["policy"]["ok"] == true);
    CHECK(profile["prefs"].size() == 40);
    REQUIRE(feast_cli(d, "profile --user ben --like" + indices(10, 30) + " --dislike" + indices(30, 50)).status == 0);

    std::set<std::string> strategies_seen;
    for (const std::string s : {"ffbr", "wffbr", "ffbcf", "cb"}) {
        run = feast_cli(d, "recommend --user ann --top-n 70 --epochs 7 --seed 5 --strategy " + s);
        REQUIRE(run.status == 0);
        const auto list = json::parse(run.out);
        CHECK(list["items"].size() == 7);
        strategies_seen.insert(list["strategy"].get<std::string>());
        CHECK(feast_cli(d, "recommend --user ann --top-n 70 --epochs 7 --seed 5 --strategy " + s).out == run.out);
    }
    CHECK(strategies_seen.size() == 4);

    run = feast_cli(d, "eval coverage");
    REQUIRE(run.status == 0);
    CHECK(json::parse(run.out).size() == 4);

    run = feast_cli(d, "eval practices --strategy ffbr --draws 3 --top-n 70");
    REQUIRE(run.status == 0);
    CHECK(json::parse(run.out).is_array());

    REQUIRE(feast_cli(d, "eval health --out health.json").status == 0);
    CHECK(json::parse(feast::test::read_file(d / "health.json")).size() == 2);

    REQUIRE(feast_cli(d, "eval correlations --csv table.csv").status == 0);
    CHECK(feast::test::read_file(d / "table.csv").rfind("feature,scale,rho,p\n", 0) == 0);
}

TEST_CASE("command line errors exit non-zero") {
    feast::test::TempDir dir;
    CHECK(feast_cli(dir.path(), "ingest --input missing.jsonl").status == 1);
    CHECK(feast_cli(dir.path(), "recommend --user nobody").status == 1);
    CHECK(feast_cli(dir.path(), "frobnicate").status != 0);
}
