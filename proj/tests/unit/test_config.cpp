#include "proxycast/config.hpp"
#include "proxycast/error.hpp"

#include "catch_amalgamated.hpp"

#include <cstdlib>

using namespace proxycast;

TEST_CASE("defaults") {
    const auto c = default_run_config();
    CHECK(c.horizon == 15);
    CHECK(c.level == 0.95);
    CHECK(c.top_k == 5);
    CHECK(c.methods.size() == 5);
    CHECK(c.grid.size() == 8);
    CHECK(c.seed == 42);
    CHECK(c.impute.seed == 42);
    CHECK(c.similarity.epsilon == 0.5);
    CHECK(c.similarity.gamma == 1.0);
    CHECK(c.target == std::filesystem::path(PROXYCAST_FIXTURE_DIR) / "target.csv");
    CHECK(c.endpoint.cache_dir == std::filesystem::path(PROXYCAST_FIXTURE_DIR) / "cache");
    CHECK(c.remote_instruments == std::vector<std::string>{"Brent"});
    REQUIRE(c.ohlcv_files.size() == 1);
    CHECK(c.ohlcv_files[0].instrument == "WTI");
}

TEST_CASE("INI parsing") {
    const auto v = parse_ini("# comment\ntop = 1\n[grid]\n rounds = 10, 20 \n; other\n[run]\nseed=7\n");
    CHECK(v.at("top") == "1");
    CHECK(v.at("grid.rounds") == "10, 20");
    CHECK(v.at("run.seed") == "7");
    CHECK_THROWS_AS(parse_ini("[grid\n"), ConfigError);
    CHECK_THROWS_AS(parse_ini("novalue\n"), ConfigError);
    CHECK_THROWS_AS(load_ini("/nonexistent/x.ini"), ConfigError);
}

TEST_CASE("values override defaults") {
    ConfigMap v{{"grid.rounds", "10,20"},       {"grid.max_depth", "2"},          {"grid.learning_rate", "0.3"},
                {"features.lags", "1-3,7"},     {"features.windows", ""},         {"intervals.horizon", "1"},
                {"selection.methods", "dtw,edr"}, {"similarity.band", "2"},       {"run.seed", "9"},
                {"data.dir", "/data"},          {"data.ohlcv", "Brent=b.csv,WTI=/abs/w.csv"}};
    const auto c = build_run_config(v, "/unused");
    CHECK(c.grid.size() == 2);
    CHECK(c.grid[1].rounds == 20);
    CHECK(c.grid[1].max_depth == 2);
    CHECK(c.features.lags == std::vector<std::size_t>{1, 2, 3, 7});
    CHECK(c.features.rolling_windows.empty());
    CHECK(c.horizon == 1);
    CHECK(c.methods.size() == 2);
    CHECK(c.similarity.band == 2u);
    CHECK(c.impute.seed == 9);
    CHECK(c.target == std::filesystem::path("/data/target.csv"));
    CHECK(c.ohlcv_files[0].path == std::filesystem::path("/data/b.csv"));
    CHECK(c.ohlcv_files[1].path == std::filesystem::path("/abs/w.csv"));
}

TEST_CASE("bad values are config errors") {
    const std::vector<ConfigMap> bad{
        {{"nope.key", "1"}},
        {{"intervals.inflation", "0.8"}},
        {{"intervals.level", "1.5"}},
        {{"training.train_fraction", "1"}},
        {{"training.folds", "1"}},
        {{"grid.learning_rate", "0"}},
        {{"selection.methods", "cosine"}},
        {{"selection.k", "0"}},
        {{"features.lags", "3,1"}},
        {{"features.lags", "0"}},
        {{"similarity.gamma", "-1"}},
        {{"remote.offline", "maybe"}},
        {{"run.seed", "-4"}},
        {{"data.ohlcv", "nofile"}},
        {{"remote.start", "2020-02-30"}},
        {{"data.wide", ""}, {"data.ohlcv", ""}, {"remote.instruments", ""}},
    };
    for (const auto& v : bad) {
        INFO(v.begin()->first);
        CHECK_THROWS_AS(build_run_config(v, "/d"), ConfigError);
    }
}

TEST_CASE("every key is accepted") {
    for (const auto& key : config_keys()) {
        CHECK(key.find('.') != std::string::npos);
    }
    CHECK(config_keys().size() >= 30);
}

TEST_CASE("size lists") {
    CHECK(parse_size_list("1-3, 5") == std::vector<std::size_t>{1, 2, 3, 5});
    CHECK_THROWS_AS(parse_size_list("3-1"), ConfigError);
    CHECK_THROWS_AS(parse_size_list("x"), ConfigError);
}

TEST_CASE("environment overrides") {
    ::setenv("PROXYCAST_CACHE_TTL_HOURS", "2", 1);
    ::setenv("PROXYCAST_OFFLINE", "1", 1);
    const auto env = environment_overrides();
    CHECK(env.at("remote.ttl_hours") == "2");
    const auto c = build_run_config(env, "/d");
    CHECK(c.endpoint.ttl == std::chrono::seconds(7200));
    CHECK(c.endpoint.offline);
    ::unsetenv("PROXYCAST_CACHE_TTL_HOURS");
    ::unsetenv("PROXYCAST_OFFLINE");
    CHECK(environment_overrides().empty());
}
