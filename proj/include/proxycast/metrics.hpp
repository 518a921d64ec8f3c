#pragma once

#include <optional>
#include <span>

namespace proxycast {

struct Metrics {
    double rmse = 0.0;
    double mae = 0.0;
    std::optional<double> r2;  // nullopt when the actuals have zero variance
};

Metrics compute_metrics(std::span<const double> actual, std::span<const double> predicted);

}  // namespace proxycast
