#pragma once

#include "proxycast/series.hpp"
#include "proxycast/similarity.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace proxycast {

struct RankEntry {
    std::string candidate;
    double distance = 0.0;
};

/// Candidates for one measure, ascending by distance (ties by id).
struct MethodRanking {
    similarity::Method method = similarity::Method::dtw;
    std::vector<RankEntry> entries;
    std::vector<std::string> excluded;  // candidates with non-finite distance
};

/// Distances from `target` to every candidate under `method`. Candidates must
/// cover exactly the target's years.
MethodRanking rank_by_method(const AnnualSeries& target, std::span<const AnnualSeries> candidates,
                             similarity::Method method, const similarity::SimilarityConfig& config);

struct ConsensusResult {
    std::string winner;
    std::size_t k = 0;
    std::vector<similarity::Method> methods;
    std::vector<std::vector<std::string>> top_k;  // per method, best first
    std::map<std::string, int> borda;
    std::map<std::string, int> top1;
};

/// Borda count over each method's top-k: rank r earns k - r + 1 points.
/// Ties on score go to the higher top-1 count, then the smaller id.
ConsensusResult consensus_select(std::span<const MethodRanking> rankings, std::size_t k);

}  // namespace proxycast
