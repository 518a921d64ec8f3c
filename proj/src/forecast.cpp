#include "proxycast/forecast.hpp"

#include "proxycast/error.hpp"
#include "proxycast/features.hpp"

#include <algorithm>
#include <cmath>

namespace proxycast {

Date next_step_date(const TimeSeries& history, const Date& last) {
    const bool trading_days =
        std::none_of(history.dates.begin(), history.dates.end(), [](const Date& d) { return is_weekend(d); });
    Date next = add_days(last, 1);
    while (trading_days && is_weekend(next)) next = add_days(next, 1);
    return next;
}

std::vector<StepForecast> recursive_forecast(const gbt::BoostedEnsemble& model, const TimeSeries& history,
                                             std::size_t horizon) {
    if (horizon < 1) throw ConfigError("forecast horizon must be >= 1");
    const auto& spec = model.feature_spec;
    if (spec.width() != model.feature_count) throw DataError("model feature spec does not match its width");
    const auto raw = history.dense_values();
    if (raw.size() < spec.history_needed() || raw.empty()) {
        throw DataError("history of " + std::to_string(raw.size()) + " values is too short; the model needs " +
                        std::to_string(std::max<std::size_t>(spec.history_needed(), 1)));
    }

    std::vector<double> working;
    working.reserve(raw.size() + horizon);
    for (double v : raw) working.push_back(model.normalization.apply(v));

    std::vector<StepForecast> out;
    Date date = history.dates.back();
    for (std::size_t h = 0; h < horizon; ++h) {
        date = next_step_date(history, date);
        const auto row = feature_row(working, date, spec);
        const double z = gbt::predict_row(model, row);
        if (!std::isfinite(z)) throw NumericError("forecast produced a non-finite value");
        working.push_back(z);
        out.push_back({date, model.normalization.invert(z)});
    }
    return out;
}

}  // namespace proxycast
