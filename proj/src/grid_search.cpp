#include "proxycast/grid_search.hpp"

#include "proxycast/error.hpp"
#include "proxycast/metrics.hpp"

#include <string>
#include <tuple>

namespace proxycast::gbt {

std::vector<HyperParams> default_grid() {
    std::vector<HyperParams> grid;
    for (std::size_t rounds : {100, 300}) {
        for (std::size_t depth : {3, 5}) {
            for (double eta : {0.05, 0.1}) {
                HyperParams hp;
                hp.rounds = rounds;
                hp.max_depth = depth;
                hp.learning_rate = eta;
                hp.lambda = 1.0;
                hp.alpha = 0.0;
                hp.gamma = 0.0;
                hp.min_child_weight = 1.0;
                grid.push_back(hp);
            }
        }
    }
    return grid;
}

GridSearchResult grid_search(const SupervisedFrame& frame, const std::vector<HyperParams>& grid, std::size_t folds,
                             std::uint64_t seed) {
    if (grid.empty()) throw ConfigError("hyperparameter grid is empty");
    if (folds < 2) throw ConfigError("grid search needs at least 2 folds");
    for (const auto& hp : grid) validate(hp);
    const std::size_t n = frame.size();
    const std::size_t block = n / (folds + 1);
    if (block < 1) {
        throw DataError("grid search: " + std::to_string(n) + " rows are too few for " + std::to_string(folds) +
                        " rolling-origin folds");
    }

    GridSearchResult result;
    for (const auto& hp : grid) {
        GridScore score{hp, {}, 0.0};
        for (std::size_t f = 1; f <= folds; ++f) {
            const std::size_t train_end = f * block;
            // the last fold validates on everything that is left
            const std::size_t valid_end = f == folds ? n : train_end + block;
            const auto train = frame.slice(0, train_end);
            const auto valid = frame.slice(train_end, valid_end);
            const auto fit = fit_boosted_ensemble(train, hp, seed);
            const auto pred = predict(fit.model, valid.features);
            score.fold_rmse.push_back(compute_metrics(valid.targets, pred).rmse);
        }
        double sum = 0.0;
        for (double r : score.fold_rmse) sum += r;
        score.mean_rmse = sum / static_cast<double>(folds);
        result.scores.push_back(std::move(score));
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < result.scores.size(); ++i) {
        const auto& a = result.scores[i];
        const auto& b = result.scores[best];
        if (std::make_tuple(a.mean_rmse, a.params.rounds, a.params.max_depth) <
            std::make_tuple(b.mean_rmse, b.params.rounds, b.params.max_depth)) {
            best = i;
        }
    }
    result.best_index = best;
    result.best = result.scores[best].params;
    return result;
}

}  // namespace proxycast::gbt
