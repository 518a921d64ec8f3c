#include "proxycast/model_io.hpp"

#include "proxycast/csv.hpp"
#include "proxycast/error.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace proxycast::gbt {

using nlohmann::json;

std::string to_json(const BoostedEnsemble& model) {
    json doc;
    doc["format"] = kModelFormat;
    doc["base_score"] = model.base_score;
    doc["learning_rate"] = model.learning_rate;
    doc["lambda"] = model.lambda;
    doc["alpha"] = model.alpha;
    doc["feature_count"] = model.feature_count;
    doc["feature_spec"] = {{"lags", model.feature_spec.lags},
                           {"rolling_windows", model.feature_spec.rolling_windows},
                           {"day_of_week", model.feature_spec.day_of_week},
                           {"names", model.feature_spec.names()}};
    doc["normalization"] = {{"mean", model.normalization.mean}, {"stddev", model.normalization.stddev}};
    json trees = json::array();
    for (const auto& tree : model.trees) {
        json t;
        std::vector<int> feature, left, right;
        std::vector<double> threshold, weight, sum_grad, sum_hess;
        std::vector<bool> default_left;
        for (const auto& n : tree.nodes) {
            feature.push_back(n.feature);
            threshold.push_back(n.is_leaf() ? 0.0 : n.threshold);
            left.push_back(n.left);
            right.push_back(n.right);
            default_left.push_back(n.default_left);
            weight.push_back(n.weight);
            sum_grad.push_back(n.sum_grad);
            sum_hess.push_back(n.sum_hess);
        }
        t["feature"] = feature;
        t["threshold"] = threshold;
        t["left"] = left;
        t["right"] = right;
        t["default_left"] = default_left;
        t["weight"] = weight;
        t["sum_grad"] = sum_grad;
        t["sum_hess"] = sum_hess;
        trees.push_back(std::move(t));
    }
    doc["trees"] = std::move(trees);
    return doc.dump(1) + "\n";
}

BoostedEnsemble from_json(const std::string& text) {
    try {
        const json doc = json::parse(text);
        if (doc.at("format").get<std::string>() != kModelFormat) throw DataError("unsupported model format");
        BoostedEnsemble model;
        model.base_score = doc.at("base_score").get<double>();
        model.learning_rate = doc.at("learning_rate").get<double>();
        model.lambda = doc.at("lambda").get<double>();
        model.alpha = doc.at("alpha").get<double>();
        model.feature_count = doc.at("feature_count").get<std::size_t>();
        const auto& spec = doc.at("feature_spec");
        model.feature_spec.lags = spec.at("lags").get<std::vector<std::size_t>>();
        model.feature_spec.rolling_windows = spec.at("rolling_windows").get<std::vector<std::size_t>>();
        model.feature_spec.day_of_week = spec.at("day_of_week").get<bool>();
        model.normalization.mean = doc.at("normalization").at("mean").get<double>();
        model.normalization.stddev = doc.at("normalization").at("stddev").get<double>();
        for (const auto& t : doc.at("trees")) {
            const auto feature = t.at("feature").get<std::vector<int>>();
            const auto threshold = t.at("threshold").get<std::vector<double>>();
            const auto left = t.at("left").get<std::vector<int>>();
            const auto right = t.at("right").get<std::vector<int>>();
            const auto default_left = t.at("default_left").get<std::vector<bool>>();
            const auto weight = t.at("weight").get<std::vector<double>>();
            const auto sum_grad = t.at("sum_grad").get<std::vector<double>>();
            const auto sum_hess = t.at("sum_hess").get<std::vector<double>>();
            const std::size_t n = feature.size();
            if (threshold.size() != n || left.size() != n || right.size() != n || default_left.size() != n ||
                weight.size() != n || sum_grad.size() != n || sum_hess.size() != n || n == 0) {
                throw DataError("model tree arrays have inconsistent lengths");
            }
            RegressionTree tree;
            tree.nodes.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                auto& node = tree.nodes[i];
                node.feature = feature[i];
                node.threshold = threshold[i];
                node.left = left[i];
                node.right = right[i];
                node.default_left = default_left[i];
                node.weight = weight[i];
                node.sum_grad = sum_grad[i];
                node.sum_hess = sum_hess[i];
                const bool leaf = node.left < 0;
                if (!leaf && (node.right < 0 || static_cast<std::size_t>(node.left) >= n ||
                              static_cast<std::size_t>(node.right) >= n || node.left <= static_cast<int>(i) ||
                              node.right <= static_cast<int>(i) || node.feature < 0 ||
                              static_cast<std::size_t>(node.feature) >= model.feature_count)) {
                    throw DataError("model tree node " + std::to_string(i) + " is malformed");
                }
            }
            // depth is derived, parents always precede children
            for (std::size_t i = 0; i < n; ++i) {
                const auto& node = tree.nodes[i];
                if (node.left >= 0) {
                    tree.nodes[static_cast<std::size_t>(node.left)].depth = node.depth + 1;
                    tree.nodes[static_cast<std::size_t>(node.right)].depth = node.depth + 1;
                }
            }
            model.trees.push_back(std::move(tree));
        }
        return model;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed model JSON: ") + e.what());
    }
}

void save_model(const BoostedEnsemble& model, const std::filesystem::path& path) {
    csv::write_atomic(path, to_json(model));
}

BoostedEnsemble load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

}  // namespace proxycast::gbt
