#include "proxycast/error.hpp"
#include "proxycast/features.hpp"

#include "catch_amalgamated.hpp"

#include <cmath>

using namespace proxycast;

namespace {

TimeSeries ramp(std::size_t n, const char* start = "2021-03-01") {
    std::vector<double> v(n);
    std::vector<Date> d;
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = static_cast<double>(i + 1);
        d.push_back(add_days(parse_iso_date(start), static_cast<int>(i)));
    }
    return TimeSeries::from_values("ramp", d, v);
}

FeatureSpec lags_only(std::vector<std::size_t> lags) {
    FeatureSpec s;
    s.lags = std::move(lags);
    s.rolling_windows.clear();
    s.day_of_week = false;
    return s;
}

}  // namespace

TEST_CASE("single lag on 1..10") {
    const auto f = build_features(ramp(10), lags_only({1}));
    REQUIRE(f.size() == 9);
    CHECK(f.features.cols == 1);
    CHECK(f.features.at(0, 0) == 1.0);
    CHECK(f.targets[0] == 2.0);
    for (std::size_t r = 0; r < f.size(); ++r) CHECK(f.features.at(r, 0) + 1.0 == f.targets[r]);
}

TEST_CASE("two lags start at the third observation") {
    const auto s = ramp(10);
    const auto f = build_features(s, lags_only({1, 2}));
    REQUIRE(f.size() == 8);
    CHECK(f.targets[0] == 3.0);
    CHECK(f.dates[0] == s.dates[2]);
    CHECK(f.features.at(0, 0) == 2.0);
    CHECK(f.features.at(0, 1) == 1.0);
}

TEST_CASE("rolling mean of a constant is the constant") {
    std::vector<Date> d;
    for (int i = 0; i < 20; ++i) d.push_back(add_days(parse_iso_date("2020-01-01"), i));
    const auto s = TimeSeries::from_values("c", d, std::vector<double>(20, 4.25));
    FeatureSpec spec = lags_only({1});
    spec.rolling_windows = {3};
    const auto f = build_features(s, spec);
    for (std::size_t r = 0; r < f.size(); ++r) CHECK(f.features.at(r, 1) == 4.25);
}

TEST_CASE("rows match a direct reconstruction") {
    const auto s = ramp(60);
    const FeatureSpec spec;  // lags 1..14, window 7, weekday
    const auto f = build_features(s, spec);
    CHECK(f.size() == 60 - spec.history_needed());
    CHECK(f.features.cols == spec.width());
    CHECK(spec.names().size() == spec.width());
    for (std::size_t r = 0; r < f.size(); ++r) {
        const std::size_t t = r + spec.history_needed();
        CHECK(f.targets[r] == static_cast<double>(t + 1));
        for (std::size_t k = 0; k < spec.lags.size(); ++k) {
            CHECK(f.features.at(r, k) == static_cast<double>(t + 1 - spec.lags[k]));
        }
        // mean of x_{t-7} .. x_{t-1}
        CHECK(f.features.at(r, 14) == Catch::Approx(static_cast<double>(t + 1) - 4.0));
        double hot = 0.0;
        for (std::size_t k = 15; k < 22; ++k) hot += f.features.at(r, k);
        CHECK(hot == 1.0);
        CHECK(f.features.at(r, 15 + weekday_index(s.dates[t])) == 1.0);
    }
}

TEST_CASE("too-short series names the minimum length") {
    const FeatureSpec spec;
    CHECK(spec.min_length() == 22);
    CHECK_THROWS_WITH(build_features(ramp(21), spec), Catch::Matchers::ContainsSubstring("22"));
    CHECK_NOTHROW(build_features(ramp(22), spec));
}

TEST_CASE("feature spec validation") {
    CHECK_THROWS_AS(validate(lags_only({})), ConfigError);
    CHECK_THROWS_AS(validate(lags_only({2, 1})), ConfigError);
    CHECK_THROWS_AS(validate(lags_only({1, 1})), ConfigError);
    CHECK_THROWS_AS(validate(lags_only({0})), ConfigError);
}

TEST_CASE("chronological split") {
    const auto ten = build_features(ramp(11), lags_only({1}));
    REQUIRE(ten.size() == 10);
    auto [train, test] = chrono_split(ten, 0.8);
    CHECK(train.size() == 8);
    CHECK(test.size() == 2);
    CHECK(train.dates.back() < test.dates.front());

    const auto two = build_features(ramp(3), lags_only({1}));
    std::tie(train, test) = chrono_split(two, 0.5);
    CHECK(train.size() == 1);
    CHECK(test.size() == 1);

    CHECK_THROWS_AS(chrono_split(ten, 1.0), ConfigError);
    CHECK_THROWS_AS(chrono_split(ten, 0.0), ConfigError);
    const auto one = build_features(ramp(2), lags_only({1}));
    CHECK_THROWS(chrono_split(one, 0.5));

    for (double frac = 0.05; frac < 0.95; frac += 0.05) {
        std::tie(train, test) = chrono_split(build_features(ramp(101), lags_only({1})), frac);
        CHECK(train.size() == static_cast<std::size_t>(std::ceil(frac * 100 - 1e-9)));
        CHECK(train.dates.back() < test.dates.front());
    }
}
