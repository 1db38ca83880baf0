#include <doctest.h>

#include <thread>

#include "feast/accounts.hpp"
#include "feast/error.hpp"
#include "feast/profiles.hpp"
#include "support/support.hpp"

using namespace feast;
using feast::test::Gen;
using feast::test::TempDir;

TEST_CASE("set_preference examples") {
    UserProfile p;
    set_preference(p, 0, Verdict::like, 10);
    CHECK(p.prefs == std::map<std::size_t, int>{{0, 5}});

    set_preference(p, 3, Verdict::like, 10);
    set_preference(p, 3, Verdict::dislike, 10);
    CHECK(p.preference(3) == -5);

    const auto before = p.prefs;
    set_preference(p, 7, Verdict::clear, 10);
    CHECK(p.prefs == before);
    set_preference(p, 3, Verdict::clear, 10);
    CHECK(p.preference(3) == 0);
    CHECK_FALSE(p.prefs.contains(3));

    CHECK_THROWS_AS(set_preference(p, 10, Verdict::like, 10), ValidationError);
}

TEST_CASE("validate_profile examples") {
    Gen gen(1);
    const auto full = feast::test::random_profile(gen, "u", 100, 20, 20);
    CHECK(validate_profile(full, {}).ok);

    const auto short_likes = feast::test::random_profile(gen, "u", 100, 19, 25);
    const auto r = validate_profile(short_likes, {});
    CHECK_FALSE(r.ok);
    CHECK(r.missing_likes == 1);
    CHECK(r.missing_dislikes == 0);

    CHECK(validate_profile(UserProfile{}, {0, 0}).ok);
    const auto json = nlohmann::json(r);
    CHECK(json["deficit"]["likes"] == 1);
    CHECK(json["deficit"]["dislikes"] == 0);
}

TEST_CASE("validate_profile is monotone in added preferences") {
    Gen gen(8);
    for (int trial = 0; trial < 200; ++trial) {
        auto p = feast::test::dense_random_profile(gen, "u", 60, gen.real(0.0, 1.0));
        const ElicitationPolicy policy{gen.integer(0, 25), gen.integer(0, 25)};
        const bool ok = validate_profile(p, policy).ok;
        const auto f = gen.index(60);
        if (p.preference(f) == 0) set_preference(p, f, gen.chance(0.5) ? Verdict::like : Verdict::dislike, 60);
        if (ok) CHECK(validate_profile(p, policy).ok);
        for (const auto& [idx, v] : p.prefs) CHECK((v == kLike || v == kDislike));
    }
}

TEST_CASE("rate_recipe examples") {
    UserProfile p;
    rate_recipe(p, "r1", 5);
    CHECK(p.recipe_ratings.at("r1") == 5);
    rate_recipe(p, "r1", 3);
    rate_recipe(p, "r1", 4);
    CHECK(p.recipe_ratings.at("r1") == 4);
    CHECK_THROWS_AS(rate_recipe(p, "r1", 6), ValidationError);
    CHECK_THROWS_AS(rate_recipe(p, "r1", -1), ValidationError);
    CHECK(p.recipe_ratings.at("r1") == 4);
}

TEST_CASE("profile json round trip and validation") {
    UserProfile p;
    p.user_id = "alice";
    p.prefs = {{1, 5}, {12, -5}};
    p.recipe_ratings = {{"r9", 2}};
    p.demographics = Demographics{1.75, 70.0, ActivityLevel::lightly_active};
    const auto j = nlohmann::json(p);
    CHECK(j["prefs"]["12"] == -5);
    CHECK(j["demographics"]["activity_level"] == "lightly_active");
    const auto back = j.get<UserProfile>();
    CHECK(back.prefs == p.prefs);
    CHECK(back.recipe_ratings == p.recipe_ratings);
    CHECK(back.demographics->activity_level == ActivityLevel::lightly_active);

    auto bad = j;
    bad["prefs"]["3"] = 2;
    CHECK_THROWS_AS(bad.get<UserProfile>(), ValidationError);
    bad = j;
    bad["demographics"]["activity_level"] = "couch";
    CHECK_THROWS_AS(bad.get<UserProfile>(), ValidationError);
    bad = j;
    bad["prefs"]["x1"] = 5;
    CHECK_THROWS_AS(bad.get<UserProfile>(), ValidationError);
}

TEST_CASE("activity levels and verdicts parse by name") {
    CHECK(parse_activity_level("extra_active") == ActivityLevel::extra_active);
    CHECK_FALSE(parse_activity_level("athletic"));
    CHECK(to_string(ActivityLevel::sedentary) == "sedentary");
    CHECK(parse_verdict("clear") == Verdict::clear);
    CHECK_FALSE(parse_verdict("meh"));
}

TEST_CASE("user ids") {
    CHECK(valid_user_id("u_1-A"));
    CHECK_FALSE(valid_user_id(""));
    CHECK_FALSE(valid_user_id("../etc"));
    CHECK_FALSE(valid_user_id(std::string(65, 'a')));
}

TEST_CASE("profile store persists and reloads") {
    TempDir dir;
    {
        ProfileStore store(dir.path());
        UserProfile p;
        p.user_id = "bob";
        store.create(p);
        CHECK_THROWS_AS(store.create(p), ValidationError);
        p.user_id = "no/slash";
        CHECK_THROWS_AS(store.create(p), ValidationError);
        store.update("bob", [](UserProfile& u) { set_preference(u, 4, Verdict::like, 10); });
        CHECK_THROWS_AS(store.update("carol", [](UserProfile&) {}), NotFoundError);
        // a failing mutation leaves the profile untouched
        CHECK_THROWS_AS(store.update("bob", [](UserProfile& u) { set_preference(u, 99, Verdict::like, 10); }),
                        ValidationError);
    }
    feast::test::write_file(dir / "junk.json", "{not json");
    ProfileStore reopened(dir.path());
    const auto bob = reopened.get("bob");
    REQUIRE(bob);
    CHECK(bob->prefs == std::map<std::size_t, int>{{4, 5}});
    CHECK(reopened.snapshot().size() == 1);
}

TEST_CASE("concurrent preference updates on distinct features commute") {
    TempDir dir;
    ProfileStore store(dir.path());
    UserProfile p;
    p.user_id = "u";
    store.create(p);
    constexpr std::size_t kThreads = 4, kPerThread = 25;
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < kThreads; ++t) {
        threads.emplace_back([&, t] {
            for (std::size_t i = 0; i < kPerThread; ++i) {
                const std::size_t f = t * kPerThread + i;
                store.update("u", [&](UserProfile& u) {
                    set_preference(u, f, f % 2 ? Verdict::dislike : Verdict::like, kThreads * kPerThread);
                });
                const auto seen = store.get("u");
                for (const auto& [idx, v] : seen->prefs) CHECK((v == kLike || v == kDislike));
            }
        });
    }
    for (auto& th : threads) th.join();
    const auto final_profile = store.get("u");
    CHECK(final_profile->prefs.size() == kThreads * kPerThread);
    ProfileStore reopened(dir.path());
    CHECK(reopened.get("u")->prefs == final_profile->prefs);
}

TEST_CASE("accounts store salted hashes and issue tokens") {
    TempDir dir;
    AccountStore accounts(dir.path(), 1000);
    const auto token = accounts.register_account("alice", "s3cret");
    CHECK(accounts.authenticate(token) == "alice");
    CHECK_FALSE(accounts.authenticate("forged"));
    CHECK_THROWS_AS(accounts.register_account("alice", "other"), ValidationError);
    CHECK_THROWS_AS(accounts.register_account("bad name", "x"), ValidationError);
    CHECK_THROWS_AS(accounts.register_account("carol", ""), ValidationError);

    const auto stored = feast::test::read_file(dir / "alice.json");
    CHECK(stored.find("s3cret") == std::string::npos);

    CHECK_FALSE(accounts.login("alice", "wrong"));
    CHECK_FALSE(accounts.login("nobody", "s3cret"));
    const auto again = accounts.login("alice", "s3cret");
    REQUIRE(again);
    CHECK(*again != token);
    CHECK(accounts.authenticate(*again) == "alice");

    CHECK(hash_password("pw", "salt", 1000) == hash_password("pw", "salt", 1000));
    CHECK(hash_password("pw", "salt", 1000) != hash_password("pw", "salt2", 1000));
}
