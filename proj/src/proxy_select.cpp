#include "proxycast/proxy_select.hpp"

#include "proxycast/error.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace proxycast {

MethodRanking rank_by_method(const AnnualSeries& target, std::span<const AnnualSeries> candidates,
                             similarity::Method method, const similarity::SimilarityConfig& config) {
    similarity::validate(config);
    MethodRanking ranking;
    ranking.method = method;
    for (const auto& c : candidates) {
        if (c.years != target.years) {
            throw DataError("candidate '" + c.id + "' does not cover the target's years");
        }
        const double d = similarity::distance(method, target.values, c.values, config);
        if (!std::isfinite(d)) {
            ranking.excluded.push_back(c.id);
            continue;
        }
        ranking.entries.push_back({c.id, d});
    }
    std::sort(ranking.entries.begin(), ranking.entries.end(), [](const RankEntry& a, const RankEntry& b) {
        return std::tie(a.distance, a.candidate) < std::tie(b.distance, b.candidate);
    });
    return ranking;
}

ConsensusResult consensus_select(std::span<const MethodRanking> rankings, std::size_t k) {
    if (rankings.empty()) throw DataError("consensus needs at least one ranking");
    if (k < 1) throw ConfigError("consensus k must be >= 1");
    ConsensusResult result;
    result.k = k;
    for (const auto& ranking : rankings) {
        result.methods.push_back(ranking.method);
        std::vector<std::string> top;
        const std::size_t depth = std::min(k, ranking.entries.size());
        for (std::size_t r = 0; r < depth; ++r) {
            const auto& id = ranking.entries[r].candidate;
            top.push_back(id);
            result.borda[id] += static_cast<int>(k - r);
            result.top1[id] += r == 0 ? 1 : 0;
        }
        result.top_k.push_back(std::move(top));
    }
    if (result.borda.empty()) throw DataError("consensus: every ranking is empty");

    const std::string* best = nullptr;
    for (const auto& [id, score] : result.borda) {
        if (best == nullptr) {
            best = &id;
            continue;
        }
        const int best_score = result.borda.at(*best);
        const int top1 = result.top1[id];
        const int best_top1 = result.top1[*best];
        // map iteration is by ascending id, so equal keys keep the earlier id
        if (score > best_score || (score == best_score && top1 > best_top1)) best = &id;
    }
    result.winner = *best;
    return result;
}

}  // namespace proxycast
