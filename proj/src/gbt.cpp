#include "proxycast/gbt.hpp"

#include "proxycast/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace proxycast::gbt {

void validate(const HyperParams& hp) {
    if (hp.rounds < 1) throw ConfigError("boosting rounds must be >= 1");
    if (!(hp.learning_rate > 0.0 && hp.learning_rate <= 1.0)) throw ConfigError("learning rate must lie in (0, 1]");
    if (!(hp.lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
    if (!(hp.alpha >= 0.0)) throw ConfigError("alpha must be >= 0");
    if (!(hp.gamma >= 0.0)) throw ConfigError("gamma must be >= 0");
    if (!(hp.min_child_weight >= 0.0)) throw ConfigError("min child weight must be >= 0");
}

double soft_threshold(double g, double alpha) {
    if (g > alpha) return g - alpha;
    if (g < -alpha) return g + alpha;
    return 0.0;
}

double leaf_weight(double sum_grad, double sum_hess, double lambda, double alpha) {
    const double denom = sum_hess + lambda;
    if (denom <= 0.0) return 0.0;
    return -soft_threshold(sum_grad, alpha) / denom;
}

std::size_t RegressionTree::leaf_index(std::span<const double> row) const {
    std::size_t i = 0;
    while (!nodes[i].is_leaf()) {
        const auto& n = nodes[i];
        const double v = row[static_cast<std::size_t>(n.feature)];
        bool left;
        if (std::isnan(v)) {
            left = n.default_left;
        } else {
            left = v < n.threshold;
        }
        i = static_cast<std::size_t>(left ? n.left : n.right);
    }
    return i;
}

double RegressionTree::predict(std::span<const double> row) const { return nodes[leaf_index(row)].weight; }

std::size_t RegressionTree::depth() const {
    std::size_t d = 0;
    for (const auto& n : nodes) d = std::max(d, n.depth);
    return d;
}

namespace {

using Index = std::uint32_t;

struct NodeRows {
    std::vector<std::vector<Index>> sorted;   // per feature, rows with a value, ascending
    std::vector<std::vector<Index>> missing;  // per feature, rows with NaN
};

struct SplitChoice {
    double gain = 0.0;
    int feature = -1;
    double threshold = 0.0;
    bool default_left = true;
};

class TreeBuilder {
public:
    TreeBuilder(const FeatureMatrix& x, std::span<const double> grad, const HyperParams& hp)
        : x_(x), grad_(grad), hp_(hp), goes_left_(x.rows, 0) {}

    RegressionTree build(NodeRows root) {
        tree_.nodes.clear();
        grow(std::move(root), 0);
        return std::move(tree_);
    }

private:
    double score(double g, double h) const {
        const double t = soft_threshold(g, hp_.alpha);
        const double denom = h + hp_.lambda;
        return denom > 0.0 ? t * t / denom : 0.0;
    }

    int grow(NodeRows rows, std::size_t depth) {
        const int id = static_cast<int>(tree_.nodes.size());
        tree_.nodes.emplace_back();

        // every row appears in exactly one of sorted[0] / missing[0]
        double g = 0.0;
        double h = 0.0;
        for (Index r : rows.sorted[0]) g += grad_[r], h += 1.0;
        for (Index r : rows.missing[0]) g += grad_[r], h += 1.0;
        {
            auto& node = tree_.nodes[static_cast<std::size_t>(id)];
            node.sum_grad = g;
            node.sum_hess = h;
            node.depth = depth;
            node.weight = leaf_weight(g, h, hp_.lambda, hp_.alpha);
        }
        if (depth >= hp_.max_depth) return id;

        const SplitChoice best = find_split(rows, g, h);
        if (best.feature < 0 || !(best.gain > 0.0)) return id;

        const auto f = static_cast<std::size_t>(best.feature);
        for (Index r : rows.sorted[f]) goes_left_[r] = x_.at(r, f) < best.threshold ? 1 : 0;
        for (Index r : rows.missing[f]) goes_left_[r] = best.default_left ? 1 : 0;

        NodeRows left;
        NodeRows right;
        const std::size_t width = rows.sorted.size();
        left.sorted.resize(width);
        left.missing.resize(width);
        right.sorted.resize(width);
        right.missing.resize(width);
        for (std::size_t k = 0; k < width; ++k) {
            for (Index r : rows.sorted[k]) (goes_left_[r] ? left : right).sorted[k].push_back(r);
            for (Index r : rows.missing[k]) (goes_left_[r] ? left : right).missing[k].push_back(r);
        }
        rows = NodeRows{};

        {
            auto& node = tree_.nodes[static_cast<std::size_t>(id)];
            node.feature = best.feature;
            node.threshold = best.threshold;
            node.default_left = best.default_left;
        }
        const int l = grow(std::move(left), depth + 1);
        const int r = grow(std::move(right), depth + 1);
        tree_.nodes[static_cast<std::size_t>(id)].left = l;
        tree_.nodes[static_cast<std::size_t>(id)].right = r;
        return id;
    }

    // Features scanned in index order, thresholds ascending, strict improvement
    // only: ties resolve to the lowest feature, then the lowest threshold.
    // Only positive gains are recorded, so feature < 0 means "no split".
    SplitChoice find_split(const NodeRows& rows, double g_total, double h_total) const {
        SplitChoice best;
        const double parent = score(g_total, h_total);
        for (std::size_t f = 0; f < rows.sorted.size(); ++f) {
            const auto& order = rows.sorted[f];
            if (order.size() < 2) continue;
            double g_miss = 0.0;
            double h_miss = 0.0;
            for (Index r : rows.missing[f]) g_miss += grad_[r], h_miss += 1.0;

            double g_left = 0.0;
            double h_left = 0.0;
            for (std::size_t i = 0; i + 1 < order.size(); ++i) {
                g_left += grad_[order[i]];
                h_left += 1.0;
                const double a = x_.at(order[i], f);
                const double b = x_.at(order[i + 1], f);
                if (!(a < b)) continue;

                // missing rows sent right, then left
                for (int side = 0; side < 2; ++side) {
                    const bool miss_left = side == 1;
                    if (miss_left && h_miss == 0.0) break;
                    const double gl = g_left + (miss_left ? g_miss : 0.0);
                    const double hl = h_left + (miss_left ? h_miss : 0.0);
                    const double gr = g_total - gl;
                    const double hr = h_total - hl;
                    if (hl < hp_.min_child_weight || hr < hp_.min_child_weight) continue;
                    const double gain = 0.5 * (score(gl, hl) + score(gr, hr) - parent) - hp_.gamma;
                    if (gain > best.gain) {
                        double threshold = a + (b - a) * 0.5;
                        if (!(threshold > a)) threshold = b;
                        bool default_left = miss_left;
                        if (h_miss == 0.0) default_left = hl >= hr;
                        best = {gain, static_cast<int>(f), threshold, default_left};
                    }
                }
            }
        }
        return best;
    }

    const FeatureMatrix& x_;
    std::span<const double> grad_;
    const HyperParams& hp_;
    std::vector<char> goes_left_;
    RegressionTree tree_;
};

double rmse_of(std::span<const double> pred, std::span<const double> y) {
    double ss = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) ss += (pred[i] - y[i]) * (pred[i] - y[i]);
    return std::sqrt(ss / static_cast<double>(y.size()));
}

}  // namespace

FitResult fit_boosted_ensemble(const FeatureMatrix& features, std::span<const double> targets, const HyperParams& hp,
                               std::uint64_t /*seed*/) {
    validate(hp);
    const std::size_t n = targets.size();
    if (n == 0) throw DataError("cannot fit on an empty training set");
    if (features.rows != n) throw DataError("feature rows do not match target count");
    if (features.cols == 0) throw DataError("training set has no feature columns");
    for (double v : targets) {
        if (!std::isfinite(v)) throw DataError("training targets must be finite");
    }
    for (double v : features.data) {
        if (std::isinf(v)) throw DataError("training features must be finite or missing");
    }

    NodeRows root;
    root.sorted.resize(features.cols);
    root.missing.resize(features.cols);
    for (std::size_t f = 0; f < features.cols; ++f) {
        for (Index r = 0; r < n; ++r) {
            (std::isnan(features.at(r, f)) ? root.missing[f] : root.sorted[f]).push_back(r);
        }
        std::stable_sort(root.sorted[f].begin(), root.sorted[f].end(),
                         [&](Index a, Index b) { return features.at(a, f) < features.at(b, f); });
    }

    FitResult result;
    auto& model = result.model;
    model.base_score = std::accumulate(targets.begin(), targets.end(), 0.0) / static_cast<double>(n);
    model.learning_rate = hp.learning_rate;
    model.feature_count = features.cols;
    model.lambda = hp.lambda;
    model.alpha = hp.alpha;

    std::vector<double> tree_sum(n, 0.0);
    std::vector<double> pred(n, model.base_score);
    std::vector<double> grad(n);
    double previous = rmse_of(pred, targets);

    for (std::size_t round = 0; round < hp.rounds; ++round) {
        for (std::size_t i = 0; i < n; ++i) grad[i] = pred[i] - targets[i];
        TreeBuilder builder(features, grad, hp);
        model.trees.push_back(builder.build(root));
        const auto& tree = model.trees.back();
        for (std::size_t i = 0; i < n; ++i) {
            tree_sum[i] += tree.predict(features.row(i));
            pred[i] = model.base_score + model.learning_rate * tree_sum[i];
        }
        const double rmse = rmse_of(pred, targets);
        if (!std::isfinite(rmse)) {
            throw NumericError("training loss became non-finite in round " + std::to_string(round + 1));
        }
        if (rmse > previous * (1.0 + 1e-9) + 1e-300) {
            throw NumericError("training rmse rose from " + std::to_string(previous) + " to " + std::to_string(rmse) +
                               " in round " + std::to_string(round + 1));
        }
        previous = rmse;
        result.round_rmse.push_back(rmse);
    }
    result.train_predictions = std::move(pred);
    return result;
}

FitResult fit_boosted_ensemble(const SupervisedFrame& train, const HyperParams& hp, std::uint64_t seed) {
    return fit_boosted_ensemble(train.features, train.targets, hp, seed);
}

double predict_row(const BoostedEnsemble& model, std::span<const double> row) {
    if (row.size() != model.feature_count) {
        throw DataError("feature width " + std::to_string(row.size()) + " does not match the model's " +
                        std::to_string(model.feature_count));
    }
    double sum = 0.0;
    for (const auto& tree : model.trees) sum += tree.predict(row);
    return model.base_score + model.learning_rate * sum;
}

std::vector<double> predict(const BoostedEnsemble& model, const FeatureMatrix& rows) {
    if (rows.cols != model.feature_count && rows.rows > 0) {
        throw DataError("feature width " + std::to_string(rows.cols) + " does not match the model's " +
                        std::to_string(model.feature_count));
    }
    std::vector<double> out(rows.rows);
    for (std::size_t i = 0; i < rows.rows; ++i) out[i] = predict_row(model, rows.row(i));
    return out;
}

void verify_leaf_weights(const BoostedEnsemble& model, double tolerance) {
    for (std::size_t t = 0; t < model.trees.size(); ++t) {
        for (const auto& node : model.trees[t].nodes) {
            if (!node.is_leaf()) continue;
            const double expected = leaf_weight(node.sum_grad, node.sum_hess, model.lambda, model.alpha);
            if (std::abs(expected - node.weight) > tolerance * std::max(1.0, std::abs(expected))) {
                throw NumericError("leaf weight in tree " + std::to_string(t) + " disagrees with its (G, H)");
            }
        }
    }
}

}  // namespace proxycast::gbt
