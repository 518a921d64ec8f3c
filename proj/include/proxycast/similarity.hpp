#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace proxycast::similarity {

struct SimilarityConfig {
    double epsilon = 0.5;  // LCSS / EDR match threshold, z-normalized units
    double gamma = 1.0;    // Soft-DTW smoothing
    std::optional<std::size_t> band;  // Sakoe-Chiba half-width for DTW / Soft-DTW
};

void validate(const SimilarityConfig& config);

struct Point2D {
    double x = 0.0;
    double y = 0.0;
};

using Sequence = std::span<const double>;
using PointSet2D = std::vector<Point2D>;

/// Minimal accumulated squared-difference cost over monotone warping paths.
double dtw(Sequence x, Sequence y, const SimilarityConfig& config = {});

/// DTW with min replaced by the gamma-smoothed soft minimum. Can be negative.
double soft_dtw(Sequence x, Sequence y, const SimilarityConfig& config = {});

/// Longest common subsequence where x_i matches y_j iff |x_i - y_j| <= epsilon.
std::size_t lcs_length(Sequence x, Sequence y, double epsilon);

/// 1 - lcs_length / min(m, n), in [0, 1].
double lcss_distance(Sequence x, Sequence y, double epsilon);

/// Edit distance on real sequences: unit cost per deletion, and per
/// substitution of a pair with |a - b| >= epsilon. Empty inputs allowed.
std::size_t edr(Sequence x, Sequence y, double epsilon);

/// Symmetric Hausdorff distance between two finite point sets (Euclidean).
double hausdorff(const PointSet2D& a, const PointSet2D& b);

/// Point i becomes (i / (n - 1), x_i).
PointSet2D embed_as_trajectory(Sequence x);

/// L2 norm of x - y; lengths must match.
double euclidean(Sequence x, Sequence y);

/// Measures that proxy selection can rank by.
enum class Method { soft_dtw, dtw, lcss, edr, hausdorff, euclidean };

std::string_view method_id(Method method);
/// Column heading used in ranking reports.
std::string_view method_title(Method method);
Method parse_method(std::string_view id);

/// Distance under `method`; lower is more similar for every method.
double distance(Method method, Sequence x, Sequence y, const SimilarityConfig& config);

}  // namespace proxycast::similarity
