#pragma once

#include "proxycast/features.hpp"
#include "proxycast/series.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace proxycast::gbt {

struct HyperParams {
    std::size_t rounds = 100;
    std::size_t max_depth = 3;
    double learning_rate = 0.1;  // eta, in (0, 1]
    double lambda = 1.0;         // L2 on leaf weights
    double alpha = 0.0;          // L1 on leaf weights
    double gamma = 0.0;          // minimum split gain
    double min_child_weight = 1.0;

    bool operator==(const HyperParams&) const = default;
};

void validate(const HyperParams& hp);

/// Flattened binary tree. Node 0 is the root; leaves have left == -1.
struct RegressionTree {
    struct Node {
        int feature = -1;
        double threshold = 0.0;  // x < threshold goes left
        int left = -1;
        int right = -1;
        bool default_left = true;  // route for a missing (NaN) feature
        double weight = 0.0;       // leaf output before shrinkage
        double sum_grad = 0.0;     // G over training rows reaching the node
        double sum_hess = 0.0;     // H over training rows reaching the node
        std::size_t depth = 0;

        [[nodiscard]] bool is_leaf() const noexcept { return left < 0; }
    };

    std::vector<Node> nodes;

    [[nodiscard]] double predict(std::span<const double> row) const;
    [[nodiscard]] std::size_t leaf_index(std::span<const double> row) const;
    [[nodiscard]] std::size_t depth() const;
};

/// Prediction is base_score + learning_rate * sum of tree outputs.
struct BoostedEnsemble {
    double base_score = 0.0;
    double learning_rate = 1.0;
    std::vector<RegressionTree> trees;
    std::size_t feature_count = 0;
    FeatureSpec feature_spec;
    NormalizationParams normalization;  // scale the targets were trained on
    double lambda = 1.0;
    double alpha = 0.0;
};

struct FitResult {
    BoostedEnsemble model;
    std::vector<double> train_predictions;  // after the final round
    std::vector<double> round_rmse;         // training rmse after each round
};

/// Squared-error boosting with exact greedy splits and regularized leaves.
/// Throws NumericError if the loss goes non-finite or rises between rounds.
FitResult fit_boosted_ensemble(const FeatureMatrix& features, std::span<const double> targets, const HyperParams& hp,
                               std::uint64_t seed = 0);
FitResult fit_boosted_ensemble(const SupervisedFrame& train, const HyperParams& hp, std::uint64_t seed = 0);

std::vector<double> predict(const BoostedEnsemble& model, const FeatureMatrix& rows);
double predict_row(const BoostedEnsemble& model, std::span<const double> row);

/// -T_alpha(G) / (H + lambda) with T_alpha the soft threshold.
double leaf_weight(double sum_grad, double sum_hess, double lambda, double alpha);
double soft_threshold(double g, double alpha);

/// Checks every leaf weight against its stored (G, H). Throws NumericError.
void verify_leaf_weights(const BoostedEnsemble& model, double tolerance = 1e-12);

}  // namespace proxycast::gbt
