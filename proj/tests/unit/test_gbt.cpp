#include "proxycast/error.hpp"
#include "proxycast/gbt.hpp"

#include "catch_amalgamated.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace proxycast;
using namespace proxycast::gbt;

namespace {

FeatureMatrix column(const std::vector<double>& x) {
    FeatureMatrix m(x.size(), 1);
    for (std::size_t i = 0; i < x.size(); ++i) m.at(i, 0) = x[i];
    return m;
}

FeatureMatrix random_features(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double missing = 0.0) {
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    FeatureMatrix m(rows, cols);
    for (auto& v : m.data) v = u(rng) < missing ? NAN : n(rng);
    return m;
}

HyperParams params(std::size_t rounds, std::size_t depth, double eta, double lambda = 1.0) {
    HyperParams hp;
    hp.rounds = rounds;
    hp.max_depth = depth;
    hp.learning_rate = eta;
    hp.lambda = lambda;
    return hp;
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

// best first-split gain by trying every feature and cut point
double brute_force_root_gain(const FeatureMatrix& x, const std::vector<double>& grad, const HyperParams& hp) {
    auto score = [&](double g, double h) {
        const double t = soft_threshold(g, hp.alpha);
        return t * t / (h + hp.lambda);
    };
    const double g_all = std::accumulate(grad.begin(), grad.end(), 0.0);
    const double h_all = static_cast<double>(grad.size());
    double best = 0.0;
    for (std::size_t f = 0; f < x.cols; ++f) {
        for (std::size_t c = 0; c < x.rows; ++c) {
            const double cut = x.at(c, f);
            double gl = 0.0, hl = 0.0;
            for (std::size_t r = 0; r < x.rows; ++r) {
                if (x.at(r, f) < cut) gl += grad[r], hl += 1.0;
            }
            if (hl < hp.min_child_weight || h_all - hl < hp.min_child_weight) continue;
            best = std::max(best, 0.5 * (score(gl, hl) + score(g_all - gl, h_all - hl) - score(g_all, h_all)) - hp.gamma);
        }
    }
    return best;
}

}  // namespace

TEST_CASE("soft threshold and leaf weight") {
    CHECK(soft_threshold(3.0, 1.0) == 2.0);
    CHECK(soft_threshold(-3.0, 1.0) == -2.0);
    CHECK(soft_threshold(0.5, 1.0) == 0.0);
    CHECK(leaf_weight(-6.0, 3.0, 1.0, 0.0) == 1.5);
    CHECK(leaf_weight(-6.0, 3.0, 1.0, 2.0) == 1.0);
    CHECK(leaf_weight(0.5, 3.0, 1.0, 2.0) == 0.0);
}

TEST_CASE("depth-0 single round is the regularized mean step") {
    const std::vector<double> y{1.0, 2.0, 6.0};
    const double base = mean(y);
    double resid = 0.0;
    for (double v : y) resid += v - base;
    const double expected = base + resid / (3.0 + 1.0);
    const auto fit = fit_boosted_ensemble(column({0.0, 1.0, 2.0}), y, params(1, 0, 1.0));
    REQUIRE(fit.model.trees.size() == 1);
    CHECK(fit.model.trees[0].nodes.size() == 1);
    for (double x : {-5.0, 0.5, 100.0}) CHECK(predict_row(fit.model, std::vector<double>{x}) == expected);
}

TEST_CASE("depth-0 with lambda 0 gives the mean exactly") {
    const std::vector<double> y{0.5, 4.0, -2.5, 7.0};
    const auto fit = fit_boosted_ensemble(column({1, 2, 3, 4}), y, params(1, 0, 1.0, 0.0));
    CHECK(predict_row(fit.model, std::vector<double>{9.0}) == mean(y));
}

TEST_CASE("depth-1 leaves follow the closed form") {
    const std::vector<double> x{0, 1, 2, 10, 11, 12, 13};
    const std::vector<double> y{1, 1.5, 0.5, 8, 9, 7, 8};
    const auto fit = fit_boosted_ensemble(column(x), y, params(1, 1, 1.0));
    const double base = mean(y);
    const auto& tree = fit.model.trees.at(0);
    REQUIRE(tree.nodes.size() == 3);
    CHECK(tree.nodes[0].threshold == 6.0);
    double lo = 0.0, hi = 0.0;
    for (int i = 0; i < 3; ++i) lo += y[i] - base;
    for (int i = 3; i < 7; ++i) hi += y[i] - base;
    CHECK(predict_row(fit.model, std::vector<double>{1.0}) == Catch::Approx(base + lo / (3 + 1.0)).epsilon(1e-14));
    CHECK(predict_row(fit.model, std::vector<double>{12.0}) == Catch::Approx(base + hi / (4 + 1.0)).epsilon(1e-14));
}

TEST_CASE("root split reaches the best enumerated gain") {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const auto x = random_features(rng, 25, 3);
        std::vector<double> y(25);
        for (std::size_t r = 0; r < y.size(); ++r) y[r] = std::sin(2.0 * x.at(r, trial % 3)) + 0.3 * n(rng);
        HyperParams hp = params(1, 1, 1.0);
        hp.alpha = (trial % 2) * 0.5;
        hp.min_child_weight = 1.0 + (trial % 4);
        const auto fit = fit_boosted_ensemble(x, y, hp);
        const double base = mean(y);
        std::vector<double> grad;
        for (double v : y) grad.push_back(base - v);
        const double best = brute_force_root_gain(x, grad, hp);
        const auto& root = fit.model.trees[0].nodes[0];
        if (best <= 0.0) {
            CHECK(root.is_leaf());
            continue;
        }
        REQUIRE_FALSE(root.is_leaf());
        const auto& l = fit.model.trees[0].nodes[static_cast<std::size_t>(root.left)];
        const auto& r = fit.model.trees[0].nodes[static_cast<std::size_t>(root.right)];
        auto score = [&](double g, double h) {
            const double t = soft_threshold(g, hp.alpha);
            return t * t / (h + hp.lambda);
        };
        const double gain =
            0.5 * (score(l.sum_grad, l.sum_hess) + score(r.sum_grad, r.sum_hess) - score(root.sum_grad, root.sum_hess));
        CHECK(gain == Catch::Approx(best).epsilon(1e-9));
    }
}

TEST_CASE("learns a feature it is given exactly") {
    std::vector<double> x(200);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(0.37 * static_cast<double>(i)) * 10.0;
    const auto fit = fit_boosted_ensemble(column(x), x, params(400, 8, 1.0));
    CHECK(fit.round_rmse.back() <= 1e-3);
}

TEST_CASE("training rmse never rises across rounds") {
    std::mt19937_64 rng(22);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = random_features(rng, 120, 4, trial % 2 ? 0.1 : 0.0);
        std::vector<double> y(120);
        for (std::size_t r = 0; r < y.size(); ++r) y[r] = 3.0 * n(rng) + (std::isnan(x.at(r, 0)) ? 1.0 : x.at(r, 0));
        HyperParams hp = params(40, 1 + trial % 5, trial % 3 ? 0.3 : 1.0, trial % 4 * 0.5);
        hp.alpha = trial % 3 * 0.2;
        const auto fit = fit_boosted_ensemble(x, y, hp);
        for (std::size_t i = 1; i < fit.round_rmse.size(); ++i) CHECK(fit.round_rmse[i] <= fit.round_rmse[i - 1]);
        CHECK_NOTHROW(verify_leaf_weights(fit.model));
    }
}

TEST_CASE("tree structure invariants") {
    std::mt19937_64 rng(23);
    const auto x = random_features(rng, 300, 5, 0.05);
    std::vector<double> y(300);
    for (std::size_t r = 0; r < y.size(); ++r) y[r] = static_cast<double>(r % 7);
    const auto fit = fit_boosted_ensemble(x, y, params(10, 4, 0.5));
    for (const auto& tree : fit.model.trees) {
        CHECK(tree.depth() <= 4);
        std::vector<int> seen(tree.nodes.size(), 0);
        std::vector<std::size_t> stack{0};
        while (!stack.empty()) {
            const auto i = stack.back();
            stack.pop_back();
            ++seen[i];
            const auto& n = tree.nodes[i];
            if (n.is_leaf()) {
                CHECK(n.right < 0);
                continue;
            }
            REQUIRE(n.right >= 0);
            stack.push_back(static_cast<std::size_t>(n.left));
            stack.push_back(static_cast<std::size_t>(n.right));
        }
        for (int s : seen) CHECK(s == 1);
    }
}

TEST_CASE("prediction identities") {
    BoostedEnsemble empty;
    empty.base_score = 4.5;
    empty.feature_count = 2;
    CHECK(predict_row(empty, std::vector<double>{1, 2}) == 4.5);

    BoostedEnsemble one = empty;
    one.learning_rate = 0.3;
    RegressionTree leaf;
    leaf.nodes.push_back({});
    leaf.nodes[0].weight = 2.0;
    one.trees.push_back(leaf);
    CHECK(predict_row(one, std::vector<double>{-7, 9}) == 4.5 + 0.3 * 2.0);
    CHECK_THROWS_AS(predict_row(one, std::vector<double>{1}), DataError);

    std::mt19937_64 rng(24);
    const auto x = random_features(rng, 150, 3, 0.05);
    std::vector<double> y(150);
    for (std::size_t r = 0; r < y.size(); ++r) y[r] = std::isnan(x.at(r, 1)) ? -1.0 : x.at(r, 1) * x.at(r, 1);
    const auto fit = fit_boosted_ensemble(x, y, params(50, 3, 0.1));
    CHECK(predict(fit.model, x) == fit.train_predictions);
}

TEST_CASE("missing values follow the learned default branch") {
    // missing rows carry a high target, so they should join the high side
    std::vector<double> x{0, 1, 2, 3, 10, 11, 12, 13, NAN, NAN};
    std::vector<double> y{0, 0, 0, 0, 5, 5, 5, 5, 5, 5};
    const auto fit = fit_boosted_ensemble(column(x), y, params(1, 1, 1.0, 0.0));
    CHECK(predict_row(fit.model, std::vector<double>{NAN}) == predict_row(fit.model, std::vector<double>{12.0}));
}

TEST_CASE("large split penalty keeps a single leaf") {
    std::vector<double> x{0, 1, 2, 3}, y{0, 0, 1, 1};
    HyperParams hp = params(3, 3, 1.0);
    hp.gamma = 100.0;
    const auto fit = fit_boosted_ensemble(column(x), y, hp);
    for (const auto& t : fit.model.trees) CHECK(t.nodes.size() == 1);
}

TEST_CASE("fit input validation") {
    CHECK_THROWS_AS(fit_boosted_ensemble(column({}), std::vector<double>{}, params(1, 1, 0.1)), DataError);
    CHECK_THROWS_AS(fit_boosted_ensemble(column({1, 2}), std::vector<double>{1, NAN}, params(1, 1, 0.1)), DataError);
    CHECK_THROWS_AS(fit_boosted_ensemble(column({1, 2}), std::vector<double>{1, 2}, params(1, 1, 1.5)), ConfigError);
    CHECK_THROWS_AS(fit_boosted_ensemble(column({1, 2}), std::vector<double>{1, 2}, params(0, 1, 0.1)), ConfigError);
}
