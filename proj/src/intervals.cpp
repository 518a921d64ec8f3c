#include "proxycast/intervals.hpp"

#include "proxycast/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace proxycast {

double empirical_quantile(std::vector<double> values, double p) {
    if (values.empty()) throw DataError("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

ResidualOffsets residual_quantiles(std::span<const double> actual, std::span<const double> predicted, double level) {
    if (!(level > 0.0 && level < 1.0)) throw ConfigError("interval level must lie in (0, 1)");
    if (actual.size() != predicted.size()) throw DataError("residuals: length mismatch");
    if (actual.size() < 10) {
        throw DataError("need at least 10 residuals for interval offsets, have " + std::to_string(actual.size()));
    }
    std::vector<double> residuals(actual.size());
    for (std::size_t i = 0; i < actual.size(); ++i) residuals[i] = actual[i] - predicted[i];
    const double tail = (1.0 - level) / 2.0;
    return {empirical_quantile(residuals, tail), empirical_quantile(residuals, 1.0 - tail)};
}

std::vector<IntervalForecast> build_intervals(std::span<const double> points, ResidualOffsets offsets,
                                              double inflation, double level) {
    if (!(inflation >= 1.0) || !std::isfinite(inflation)) {
        throw ConfigError("interval inflation must be >= 1 (got " + std::to_string(inflation) + ")");
    }
    if (offsets.low > offsets.high) throw DataError("interval offsets are inverted");
    std::vector<IntervalForecast> out;
    out.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        out.push_back({i + 1, points[i], points[i] + inflation * offsets.low, points[i] + inflation * offsets.high,
                       level, inflation});
    }
    return out;
}

}  // namespace proxycast
