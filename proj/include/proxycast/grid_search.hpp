#pragma once

#include "proxycast/features.hpp"
#include "proxycast/gbt.hpp"

#include <cstdint>
#include <vector>

namespace proxycast::gbt {

/// rounds {100, 300} x depth {3, 5} x eta {0.05, 0.1}, lambda 1, alpha 0,
/// gamma 0, min child weight 1.
std::vector<HyperParams> default_grid();

struct GridScore {
    HyperParams params;
    std::vector<double> fold_rmse;
    double mean_rmse = 0.0;
};

struct GridSearchResult {
    HyperParams best;
    std::size_t best_index = 0;
    std::vector<GridScore> scores;  // same order as the grid
};

/// Rolling-origin CV. Rows are cut into folds + 1 contiguous blocks; fold f
/// trains on blocks [0, f] and validates on block f + 1. Lowest mean
/// validation rmse wins; ties go to fewer rounds, then smaller depth, then
/// the earlier grid entry.
GridSearchResult grid_search(const SupervisedFrame& frame, const std::vector<HyperParams>& grid, std::size_t folds,
                             std::uint64_t seed = 0);

}  // namespace proxycast::gbt
