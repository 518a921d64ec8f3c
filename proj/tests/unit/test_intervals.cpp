#include "proxycast/error.hpp"
#include "proxycast/intervals.hpp"

#include "catch_amalgamated.hpp"

#include <random>

using namespace proxycast;
using Catch::Approx;

TEST_CASE("empirical quantile interpolates order statistics") {
    CHECK(empirical_quantile({3, 1, 2}, 0.5) == 2.0);
    CHECK(empirical_quantile({0, 10}, 0.25) == 2.5);
    CHECK(empirical_quantile({4}, 0.9) == 4.0);
    CHECK(empirical_quantile({1, 2, 3, 4}, 0.0) == 1.0);
    CHECK(empirical_quantile({1, 2, 3, 4}, 1.0) == 4.0);
}

TEST_CASE("uniform symmetric residual grid") {
    std::vector<double> actual, predicted;
    for (int i = -100; i <= 100; ++i) {
        actual.push_back(i / 100.0);
        predicted.push_back(0.0);
    }
    const auto o = residual_quantiles(actual, predicted, 0.95);
    CHECK(o.low == Approx(-0.95));
    CHECK(o.high == Approx(0.95));
}

TEST_CASE("offset signs") {
    const std::vector<double> zeros(12, 0.0);
    auto o = residual_quantiles(zeros, zeros, 0.95);
    CHECK(o.low == 0.0);
    CHECK(o.high == 0.0);

    const std::vector<double> a{-2, -1, 0, 1, 2, -2, -1, 0, 1, 2};
    o = residual_quantiles(a, std::vector<double>(10, 0.0), 0.95);
    CHECK(o.low < 0.0);
    CHECK(o.high > 0.0);

    // skewed residuals give asymmetric offsets
    const std::vector<double> skew{-1, -0.5, 0, 0.2, 0.5, 1, 2, 3, 4, 8, 9, 12};
    o = residual_quantiles(skew, std::vector<double>(skew.size(), 0.0), 0.9);
    CHECK(o.high > -o.low);
}

TEST_CASE("residual errors") {
    const std::vector<double> nine(9, 0.0);
    CHECK_THROWS_AS(residual_quantiles(nine, nine, 0.95), DataError);
    const std::vector<double> ten(10, 0.0);
    CHECK_THROWS_AS(residual_quantiles(ten, ten, 1.0), ConfigError);
    CHECK_THROWS_AS(residual_quantiles(ten, ten, 0.0), ConfigError);
}

TEST_CASE("inflation scales offsets") {
    const std::vector<double> point{10.0};
    auto r = build_intervals(point, {-1.0, 2.0}, 1.0);
    CHECK(r[0].lower == 9.0);
    CHECK(r[0].upper == 12.0);
    CHECK(r[0].step == 1);
    r = build_intervals(point, {-1.0, 2.0}, 2.0);
    CHECK(r[0].lower == 8.0);
    CHECK(r[0].upper == 14.0);
    CHECK_THROWS_AS(build_intervals(point, {-1.0, 2.0}, 0.9), ConfigError);
}

TEST_CASE("table-style row keeps its ordering") {
    // a point with asymmetric bounds like a typical report row
    const std::vector<double> point{14954.73};
    const auto r = build_intervals(point, {14077.26 - 14954.73, 15726.27 - 14954.73}, 1.0);
    CHECK(r[0].lower == Approx(14077.26));
    CHECK(r[0].upper == Approx(15726.27));
    CHECK(r[0].lower <= r[0].point);
    CHECK(r[0].point <= r[0].upper);
}

TEST_CASE("wider inflation nests and widens") {
    std::mt19937_64 rng(51);
    std::normal_distribution<double> n(0.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> a(10 + rng() % 50), p(a.size(), 0.0), pts(15);
        for (auto& v : a) v = n(rng) + 0.5;
        for (auto& v : pts) v = n(rng) * 100.0;
        const auto o = residual_quantiles(a, p, 0.95);
        const auto one = build_intervals(pts, o, 1.0);
        const auto two = build_intervals(pts, o, 2.0);
        for (std::size_t h = 0; h < pts.size(); ++h) {
            CHECK(two[h].lower <= one[h].lower);
            CHECK(two[h].upper >= one[h].upper);
            CHECK(two[h].upper - two[h].lower > one[h].upper - one[h].lower);
            CHECK(one[h].lower <= one[h].point);
            CHECK(one[h].point <= one[h].upper);
        }
    }
}
