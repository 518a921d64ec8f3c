#include "proxycast/similarity.hpp"

#include "proxycast/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace proxycast::similarity {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_sequence(Sequence x, const char* what) {
    if (x.empty()) throw DataError(std::string(what) + ": sequence is empty");
    for (double v : x) {
        if (!std::isfinite(v)) throw DataError(std::string(what) + ": sequence has a non-finite value");
    }
}

std::size_t band_width(Sequence x, Sequence y, const SimilarityConfig& config) {
    const std::size_t m = x.size();
    const std::size_t n = y.size();
    const std::size_t gap = m > n ? m - n : n - m;
    if (!config.band) return std::max(m, n);
    if (*config.band < gap) {
        throw DataError("warping band " + std::to_string(*config.band) + " excludes every path for lengths " +
                        std::to_string(m) + " and " + std::to_string(n));
    }
    return *config.band;
}

bool in_band(std::size_t i, std::size_t j, std::size_t band) {
    return (i > j ? i - j : j - i) <= band;
}

// -gamma * log(sum exp(-v / gamma)) over the finite values, shifted by the
// minimum. Terms are summed in sorted order so the result does not depend on
// argument order (keeps soft_dtw exactly symmetric).
double softmin(double a, double b, double c, double gamma) {
    std::array<double, 3> v{a, b, c};
    std::sort(v.begin(), v.end());
    if (v[0] == kInf) return kInf;
    double sum = 0.0;
    for (double t : v) {
        if (t != kInf) sum += std::exp(-(t - v[0]) / gamma);
    }
    return v[0] - gamma * std::log(sum);
}

}  // namespace

void validate(const SimilarityConfig& config) {
    if (!(config.epsilon >= 0.0) || !std::isfinite(config.epsilon)) {
        throw ConfigError("similarity epsilon must be a finite non-negative number");
    }
    if (!(config.gamma > 0.0) || !std::isfinite(config.gamma)) {
        throw ConfigError("soft-DTW gamma must be positive");
    }
}

double dtw(Sequence x, Sequence y, const SimilarityConfig& config) {
    require_sequence(x, "dtw");
    require_sequence(y, "dtw");
    const std::size_t band = band_width(x, y, config);
    const std::size_t m = x.size();
    const std::size_t n = y.size();
    std::vector<double> prev(n + 1, kInf);
    std::vector<double> curr(n + 1, kInf);
    prev[0] = 0.0;
    for (std::size_t i = 1; i <= m; ++i) {
        std::fill(curr.begin(), curr.end(), kInf);
        for (std::size_t j = 1; j <= n; ++j) {
            if (!in_band(i, j, band)) continue;
            const double cost = (x[i - 1] - y[j - 1]) * (x[i - 1] - y[j - 1]);
            curr[j] = cost + std::min({prev[j], curr[j - 1], prev[j - 1]});
        }
        std::swap(prev, curr);
    }
    return prev[n];
}

double soft_dtw(Sequence x, Sequence y, const SimilarityConfig& config) {
    if (!(config.gamma > 0.0)) throw ConfigError("soft-DTW gamma must be positive");
    require_sequence(x, "soft_dtw");
    require_sequence(y, "soft_dtw");
    const std::size_t band = band_width(x, y, config);
    const std::size_t m = x.size();
    const std::size_t n = y.size();
    std::vector<double> prev(n + 1, kInf);
    std::vector<double> curr(n + 1, kInf);
    for (std::size_t i = 1; i <= m; ++i) {
        std::fill(curr.begin(), curr.end(), kInf);
        for (std::size_t j = 1; j <= n; ++j) {
            if (!in_band(i, j, band)) continue;
            const double cost = (x[i - 1] - y[j - 1]) * (x[i - 1] - y[j - 1]);
            if (i == 1 && j == 1) {
                curr[j] = cost;
            } else {
                curr[j] = cost + softmin(prev[j], curr[j - 1], prev[j - 1], config.gamma);
            }
        }
        std::swap(prev, curr);
    }
    return prev[n];
}

std::size_t lcs_length(Sequence x, Sequence y, double epsilon) {
    const std::size_t n = y.size();
    std::vector<std::size_t> prev(n + 1, 0);
    std::vector<std::size_t> curr(n + 1, 0);
    for (double xi : x) {
        for (std::size_t j = 1; j <= n; ++j) {
            if (std::abs(xi - y[j - 1]) <= epsilon) {
                curr[j] = prev[j - 1] + 1;
            } else {
                curr[j] = std::max(prev[j], curr[j - 1]);
            }
        }
        std::swap(prev, curr);
    }
    return prev[n];
}

double lcss_distance(Sequence x, Sequence y, double epsilon) {
    const std::size_t shorter = std::min(x.size(), y.size());
    if (shorter == 0) throw DataError("lcss_distance: both sequences must be non-empty");
    return 1.0 - static_cast<double>(lcs_length(x, y, epsilon)) / static_cast<double>(shorter);
}

std::size_t edr(Sequence x, Sequence y, double epsilon) {
    const std::size_t m = x.size();
    const std::size_t n = y.size();
    // row i holds EDR of x[0, i) against every prefix of y
    std::vector<std::size_t> prev(n + 1);
    std::vector<std::size_t> curr(n + 1);
    for (std::size_t j = 0; j <= n; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= m; ++i) {
        curr[0] = i;
        for (std::size_t j = 1; j <= n; ++j) {
            const std::size_t penalty = std::abs(x[i - 1] - y[j - 1]) < epsilon ? 0 : 1;
            curr[j] = std::min({prev[j - 1] + penalty, prev[j] + 1, curr[j - 1] + 1});
        }
        std::swap(prev, curr);
    }
    return prev[n];
}

double hausdorff(const PointSet2D& a, const PointSet2D& b) {
    if (a.empty() || b.empty()) throw DataError("hausdorff: point sets must be non-empty");
    auto directed = [](const PointSet2D& from, const PointSet2D& to) {
        double worst = 0.0;
        for (const auto& p : from) {
            double best = kInf;
            for (const auto& q : to) best = std::min(best, std::hypot(p.x - q.x, p.y - q.y));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

PointSet2D embed_as_trajectory(Sequence x) {
    if (x.size() < 2) throw DataError("embed_as_trajectory: needs at least 2 values");
    PointSet2D points;
    points.reserve(x.size());
    const double last = static_cast<double>(x.size() - 1);
    for (std::size_t i = 0; i < x.size(); ++i) points.push_back({static_cast<double>(i) / last, x[i]});
    return points;
}

double euclidean(Sequence x, Sequence y) {
    if (x.size() != y.size()) {
        throw DataError("euclidean: length mismatch (" + std::to_string(x.size()) + " vs " +
                        std::to_string(y.size()) + ")");
    }
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) ss += (x[i] - y[i]) * (x[i] - y[i]);
    return std::sqrt(ss);
}

std::string_view method_id(Method method) {
    switch (method) {
        case Method::soft_dtw: return "soft_dtw";
        case Method::dtw: return "dtw";
        case Method::lcss: return "lcss";
        case Method::edr: return "edr";
        case Method::hausdorff: return "hausdorff";
        case Method::euclidean: return "euclidean";
    }
    return "unknown";
}

std::string_view method_title(Method method) {
    switch (method) {
        case Method::soft_dtw: return "Soft-DTW Distance";
        case Method::dtw: return "DTW Distance";
        case Method::lcss: return "LCSS";
        case Method::edr: return "edr";
        case Method::hausdorff: return "hausdorff";
        case Method::euclidean: return "euclidean";
    }
    return "unknown";
}

Method parse_method(std::string_view id) {
    for (Method m : {Method::soft_dtw, Method::dtw, Method::lcss, Method::edr, Method::hausdorff,
                     Method::euclidean}) {
        if (method_id(m) == id) return m;
    }
    throw ConfigError("unknown similarity method '" + std::string(id) + "'");
}

double distance(Method method, Sequence x, Sequence y, const SimilarityConfig& config) {
    switch (method) {
        case Method::soft_dtw: return soft_dtw(x, y, config);
        case Method::dtw: return dtw(x, y, config);
        case Method::lcss: return lcss_distance(x, y, config.epsilon);
        case Method::edr: return static_cast<double>(edr(x, y, config.epsilon));
        case Method::hausdorff: return hausdorff(embed_as_trajectory(x), embed_as_trajectory(y));
        case Method::euclidean: return euclidean(x, y);
    }
    throw ConfigError("unknown similarity method");
}

}  // namespace proxycast::similarity
