#include "proxycast/metrics.hpp"

#include "proxycast/error.hpp"

#include <cmath>
#include <string>

namespace proxycast {

Metrics compute_metrics(std::span<const double> actual, std::span<const double> predicted) {
    if (actual.empty() || actual.size() != predicted.size()) {
        throw DataError("metrics need equal, non-zero lengths (got " + std::to_string(actual.size()) + " and " +
                        std::to_string(predicted.size()) + ")");
    }
    const auto n = static_cast<double>(actual.size());
    double mean = 0.0;
    for (double a : actual) mean += a;
    mean /= n;

    double sse = 0.0;
    double sae = 0.0;
    double sst = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double e = actual[i] - predicted[i];
        sse += e * e;
        sae += std::abs(e);
        sst += (actual[i] - mean) * (actual[i] - mean);
    }
    Metrics m;
    m.rmse = std::sqrt(sse / n);
    m.mae = sae / n;
    if (sst > 0.0) m.r2 = 1.0 - sse / sst;
    return m;
}

}  // namespace proxycast
