#pragma once

#include "proxycast/date.hpp"
#include "proxycast/series.hpp"

#include <span>
#include <string>
#include <vector>

namespace proxycast {

struct FeatureSpec {
    std::vector<std::size_t> lags{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14};
    std::vector<std::size_t> rolling_windows{7};
    bool day_of_week = true;

    [[nodiscard]] std::size_t width() const;
    [[nodiscard]] std::size_t history_needed() const;  // rows dropped at the front
    [[nodiscard]] std::size_t min_length() const;      // max lag + max window + 1
    [[nodiscard]] std::vector<std::string> names() const;
};

void validate(const FeatureSpec& spec);

/// Row-major feature block. NaN marks a missing feature.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    FeatureMatrix() = default;
    FeatureMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    [[nodiscard]] double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    [[nodiscard]] std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
    void append_row(std::span<const double> values);
};

struct SupervisedFrame {
    FeatureMatrix features;
    std::vector<double> targets;
    std::vector<Date> dates;

    [[nodiscard]] std::size_t size() const noexcept { return targets.size(); }
    [[nodiscard]] SupervisedFrame slice(std::size_t begin, std::size_t end) const;
};

void validate(const SupervisedFrame& frame);

/// Features for predicting values[t] from values[0, t) and the date of t.
std::vector<double> feature_row(std::span<const double> history, const Date& target_date, const FeatureSpec& spec);

/// Lag, trailing-mean, and weekday features with target x_t. Rows lacking
/// full history are dropped.
SupervisedFrame build_features(const TimeSeries& series, const FeatureSpec& spec);

/// Earliest ceil(fraction * n) rows train, the rest test. No shuffling.
std::pair<SupervisedFrame, SupervisedFrame> chrono_split(const SupervisedFrame& frame, double train_fraction);

}  // namespace proxycast
