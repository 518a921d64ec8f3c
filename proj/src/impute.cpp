#include "proxycast/impute.hpp"

#include "proxycast/error.hpp"

#include <cmath>
#include <random>
#include <string>

namespace proxycast {

void validate(const AutoencoderConfig& config) {
    if (config.hidden_width && *config.hidden_width < 1) throw ConfigError("autoencoder hidden width must be >= 1");
    if (!(config.learning_rate > 0.0) || !std::isfinite(config.learning_rate)) {
        throw ConfigError("autoencoder learning rate must be positive");
    }
    if (config.epochs < 1) throw ConfigError("autoencoder epochs must be >= 1");
}

namespace {

// Row-major dense block, just enough linear algebra for one hidden layer.
struct Dense {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Dense() = default;
    Dense(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

struct Network {
    Dense w1;  // d x h
    std::vector<double> b1;
    Dense w2;  // h x d
    std::vector<double> b2;
};

struct Forward {
    Dense hidden;  // n x h, post-activation
    Dense output;  // n x d
};

Forward forward(const Network& net, const Dense& x) {
    const std::size_t n = x.rows;
    const std::size_t d = x.cols;
    const std::size_t h = net.b1.size();
    Forward f{Dense(n, h), Dense(n, d)};
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = 0; k < h; ++k) {
            double z = net.b1[k];
            for (std::size_t c = 0; c < d; ++c) z += x(r, c) * net.w1(c, k);
            f.hidden(r, k) = std::tanh(z);
        }
        for (std::size_t c = 0; c < d; ++c) {
            double y = net.b2[c];
            for (std::size_t k = 0; k < h; ++k) y += f.hidden(r, k) * net.w2(k, c);
            f.output(r, c) = y;
        }
    }
    return f;
}

// Adam moments for one parameter block.
struct Moments {
    std::vector<double> m;
    std::vector<double> v;
    explicit Moments(std::size_t size) : m(size, 0.0), v(size, 0.0) {}
};

void adam_step(std::vector<double>& param, const std::vector<double>& grad, Moments& mom, double lr,
               std::size_t t) {
    constexpr double beta1 = 0.9;
    constexpr double beta2 = 0.999;
    constexpr double eps = 1e-8;
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    for (std::size_t i = 0; i < param.size(); ++i) {
        mom.m[i] = beta1 * mom.m[i] + (1.0 - beta1) * grad[i];
        mom.v[i] = beta2 * mom.v[i] + (1.0 - beta2) * grad[i] * grad[i];
        param[i] -= lr * (mom.m[i] / c1) / (std::sqrt(mom.v[i] / c2) + eps);
    }
}

}  // namespace

DataMatrix impute_autoencoder(const DataMatrix& matrix, const AutoencoderConfig& config,
                              ImputationReport* report) {
    if (matrix.cols() == 0 || matrix.rows() == 0) throw DataError("cannot impute an empty matrix");
    validate(matrix);
    validate(config);

    const std::size_t n = matrix.rows();
    const std::size_t d = matrix.cols();
    const std::size_t h = config.hidden_width.value_or((d + 1) / 2);
    const std::size_t missing = matrix.missing_count();

    DataMatrix out = matrix;
    for (auto& col : out.observed) col.assign(n, true);
    if (report) *report = {0, 0.0, h};
    if (missing == 0) return out;

    Dense x(n, d);
    std::size_t observed_cells = 0;
    for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t r = 0; r < n; ++r) {
            if (matrix.observed[c][r]) {
                x(r, c) = matrix.columns[c][r];
                ++observed_cells;
            }
        }
    }

    std::mt19937_64 rng(config.seed);
    Network net{Dense(d, h), std::vector<double>(h, 0.0), Dense(h, d), std::vector<double>(d, 0.0)};
    const double limit = std::sqrt(6.0 / static_cast<double>(d + h));
    std::uniform_real_distribution<double> init(-limit, limit);
    for (auto& w : net.w1.data) w = init(rng);
    for (auto& w : net.w2.data) w = init(rng);

    Moments mw1(net.w1.data.size()), mb1(h), mw2(net.w2.data.size()), mb2(d);
    Dense gw1(d, h), gw2(h, d);
    std::vector<double> gb1(h), gb2(d);
    Dense dy(n, d), dh(n, h);
    const double scale = 2.0 / static_cast<double>(observed_cells);
    double loss = 0.0;

    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        const Forward f = forward(net, x);

        loss = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < d; ++c) {
                if (matrix.observed[c][r]) {
                    const double e = f.output(r, c) - matrix.columns[c][r];
                    loss += e * e;
                    dy(r, c) = scale * e;
                } else {
                    dy(r, c) = 0.0;
                }
            }
        }
        loss /= static_cast<double>(observed_cells);
        if (!std::isfinite(loss)) {
            throw NumericError("autoencoder loss became non-finite at epoch " + std::to_string(epoch));
        }

        std::fill(gw2.data.begin(), gw2.data.end(), 0.0);
        std::fill(gb2.begin(), gb2.end(), 0.0);
        std::fill(gw1.data.begin(), gw1.data.end(), 0.0);
        std::fill(gb1.begin(), gb1.end(), 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < d; ++c) {
                gb2[c] += dy(r, c);
                for (std::size_t k = 0; k < h; ++k) gw2(k, c) += f.hidden(r, k) * dy(r, c);
            }
            for (std::size_t k = 0; k < h; ++k) {
                double g = 0.0;
                for (std::size_t c = 0; c < d; ++c) g += dy(r, c) * net.w2(k, c);
                const double a = f.hidden(r, k);
                dh(r, k) = g * (1.0 - a * a);
                gb1[k] += dh(r, k);
                for (std::size_t c = 0; c < d; ++c) gw1(c, k) += x(r, c) * dh(r, k);
            }
        }

        adam_step(net.w1.data, gw1.data, mw1, config.learning_rate, epoch);
        adam_step(net.b1, gb1, mb1, config.learning_rate, epoch);
        adam_step(net.w2.data, gw2.data, mw2, config.learning_rate, epoch);
        adam_step(net.b2, gb2, mb2, config.learning_rate, epoch);

        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < d; ++c) {
                if (!matrix.observed[c][r]) x(r, c) = f.output(r, c);
            }
        }
    }

    const Forward final_pass = forward(net, x);
    for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t r = 0; r < n; ++r) {
            if (!matrix.observed[c][r]) {
                const double v = final_pass.output(r, c);
                if (!std::isfinite(v)) throw NumericError("autoencoder produced a non-finite reconstruction");
                out.columns[c][r] = v;
            }
        }
    }
    if (report) *report = {missing, loss, h};
    return out;
}

DataMatrix impute_standardized(const DataMatrix& matrix, const AutoencoderConfig& config,
                               ImputationReport* report) {
    if (matrix.cols() == 0 || matrix.rows() == 0) throw DataError("cannot impute an empty matrix");
    validate(matrix);
    DataMatrix scaled = matrix;
    std::vector<NormalizationParams> params;
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
        std::vector<double> obs;
        for (std::size_t r = 0; r < matrix.rows(); ++r) {
            if (matrix.observed[c][r]) obs.push_back(matrix.columns[c][r]);
        }
        NormalizationParams p;
        try {
            p = fit_normalization(obs);
        } catch (const DataError&) {
            throw DataError("column '" + matrix.column_ids[c] + "' has zero variance");
        }
        for (std::size_t r = 0; r < matrix.rows(); ++r) {
            scaled.columns[c][r] = matrix.observed[c][r] ? p.apply(matrix.columns[c][r]) : 0.0;
        }
        params.push_back(p);
    }
    const DataMatrix filled = impute_autoencoder(scaled, config, report);
    DataMatrix out = matrix;
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
        for (std::size_t r = 0; r < matrix.rows(); ++r) {
            if (!matrix.observed[c][r]) out.columns[c][r] = params[c].invert(filled.columns[c][r]);
        }
        out.observed[c].assign(matrix.rows(), true);
    }
    return out;
}

}  // namespace proxycast
