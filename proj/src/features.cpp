#include "proxycast/features.hpp"

#include "proxycast/error.hpp"

#include <algorithm>
#include <cmath>

namespace proxycast {

namespace {

constexpr const char* kWeekdayNames[] = {"sun", "mon", "tue", "wed", "thu", "fri", "sat"};

std::size_t max_or_zero(const std::vector<std::size_t>& v) {
    return v.empty() ? 0 : *std::max_element(v.begin(), v.end());
}

}  // namespace

std::size_t FeatureSpec::width() const {
    return lags.size() + rolling_windows.size() + (day_of_week ? 7 : 0);
}

std::size_t FeatureSpec::history_needed() const {
    return std::max(max_or_zero(lags), max_or_zero(rolling_windows));
}

std::size_t FeatureSpec::min_length() const { return max_or_zero(lags) + max_or_zero(rolling_windows) + 1; }

std::vector<std::string> FeatureSpec::names() const {
    std::vector<std::string> out;
    for (auto l : lags) out.push_back("lag" + std::to_string(l));
    for (auto w : rolling_windows) out.push_back("mean" + std::to_string(w));
    if (day_of_week) {
        for (const char* d : kWeekdayNames) out.push_back(std::string("dow_") + d);
    }
    return out;
}

void validate(const FeatureSpec& spec) {
    if (spec.lags.empty()) throw ConfigError("feature spec needs at least one lag");
    for (std::size_t i = 0; i < spec.lags.size(); ++i) {
        if (spec.lags[i] == 0) throw ConfigError("lag orders must be positive");
        if (i > 0 && spec.lags[i - 1] >= spec.lags[i]) throw ConfigError("lag orders must be sorted and distinct");
    }
    for (auto w : spec.rolling_windows) {
        if (w == 0) throw ConfigError("rolling-mean windows must be positive");
    }
}

void FeatureMatrix::append_row(std::span<const double> values) {
    if (rows == 0 && cols == 0) cols = values.size();
    if (values.size() != cols) throw DataError("feature row width mismatch");
    data.insert(data.end(), values.begin(), values.end());
    ++rows;
}

SupervisedFrame SupervisedFrame::slice(std::size_t begin, std::size_t end) const {
    SupervisedFrame out;
    out.features.cols = features.cols;
    out.features.rows = end - begin;
    out.features.data.assign(features.data.begin() + static_cast<std::ptrdiff_t>(begin * features.cols),
                             features.data.begin() + static_cast<std::ptrdiff_t>(end * features.cols));
    out.targets.assign(targets.begin() + static_cast<std::ptrdiff_t>(begin),
                       targets.begin() + static_cast<std::ptrdiff_t>(end));
    if (!dates.empty()) {
        out.dates.assign(dates.begin() + static_cast<std::ptrdiff_t>(begin),
                         dates.begin() + static_cast<std::ptrdiff_t>(end));
    }
    return out;
}

void validate(const SupervisedFrame& frame) {
    if (frame.features.rows != frame.targets.size()) throw DataError("frame: feature rows != target count");
    if (!frame.dates.empty() && frame.dates.size() != frame.targets.size()) {
        throw DataError("frame: date count != target count");
    }
    for (std::size_t i = 1; i < frame.dates.size(); ++i) {
        if (!(frame.dates[i - 1] < frame.dates[i])) throw DataError("frame: dates not strictly increasing");
    }
    for (double v : frame.features.data) {
        if (std::isnan(v)) throw DataError("frame: missing feature cell");
    }
    for (double v : frame.targets) {
        if (!std::isfinite(v)) throw DataError("frame: non-finite target");
    }
}

std::vector<double> feature_row(std::span<const double> history, const Date& target_date, const FeatureSpec& spec) {
    if (history.size() < spec.history_needed()) throw DataError("not enough history for the feature spec");
    std::vector<double> row;
    row.reserve(spec.width());
    const std::size_t t = history.size();
    for (auto lag : spec.lags) row.push_back(history[t - lag]);
    for (auto w : spec.rolling_windows) {
        double sum = 0.0;
        for (std::size_t i = t - w; i < t; ++i) sum += history[i];
        row.push_back(sum / static_cast<double>(w));
    }
    if (spec.day_of_week) {
        const unsigned wd = weekday_index(target_date);
        for (unsigned d = 0; d < 7; ++d) row.push_back(d == wd ? 1.0 : 0.0);
    }
    return row;
}

SupervisedFrame build_features(const TimeSeries& series, const FeatureSpec& spec) {
    validate(spec);
    const auto values = series.dense_values();
    if (values.size() < spec.min_length()) {
        throw DataError("series '" + series.id + "' too short for features: need at least " +
                        std::to_string(spec.min_length()) + " observations, have " + std::to_string(values.size()));
    }
    SupervisedFrame frame;
    frame.features.cols = spec.width();
    const std::span<const double> all(values);
    for (std::size_t t = spec.history_needed(); t < values.size(); ++t) {
        frame.features.append_row(feature_row(all.first(t), series.dates[t], spec));
        frame.targets.push_back(values[t]);
        frame.dates.push_back(series.dates[t]);
    }
    return frame;
}

std::pair<SupervisedFrame, SupervisedFrame> chrono_split(const SupervisedFrame& frame, double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ConfigError("train fraction must lie in (0, 1)");
    const std::size_t n = frame.size();
    if (n < 2) throw DataError("chrono_split needs at least 2 rows");
    // the slack absorbs representation error, e.g. 0.7 * 10 == 7.000000000000001
    const auto cut = static_cast<std::size_t>(std::ceil(train_fraction * static_cast<double>(n) - 1e-9));
    if (cut == 0 || cut >= n) {
        throw DataError("train fraction " + std::to_string(train_fraction) + " leaves an empty side for " +
                        std::to_string(n) + " rows");
    }
    auto split = std::make_pair(frame.slice(0, cut), frame.slice(cut, n));
    if (!frame.dates.empty() && !(split.first.dates.back() < split.second.dates.front())) {
        throw DataError("chrono_split: train dates overlap test dates");
    }
    return split;
}

}  // namespace proxycast
