#pragma once

#include <span>
#include <utility>
#include <vector>

namespace proxycast {

struct IntervalForecast {
    std::size_t step = 0;  // 1-based
    double point = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.95;
    double inflation = 1.0;
};

/// Linear interpolation between order statistics at probability p in [0, 1].
double empirical_quantile(std::vector<double> values, double p);

struct ResidualOffsets {
    double low = 0.0;
    double high = 0.0;
};

/// Quantiles of actual - predicted at (1 - level) / 2 and (1 + level) / 2.
/// Needs at least 10 residuals.
ResidualOffsets residual_quantiles(std::span<const double> actual, std::span<const double> predicted, double level);

/// lower = point + inflation * low, upper = point + inflation * high.
/// Inflation below 1 is rejected.
std::vector<IntervalForecast> build_intervals(std::span<const double> points, ResidualOffsets offsets,
                                              double inflation, double level = 0.95);

}  // namespace proxycast
