#pragma once

#include "proxycast/gbt.hpp"
#include "proxycast/series.hpp"

#include <vector>

namespace proxycast {

/// Date of the step after `last`. Weekends are skipped when `history` has
/// none, so a trading-day series continues on trading days.
Date next_step_date(const TimeSeries& history, const Date& last);

struct StepForecast {
    Date date;
    double value = 0.0;
};

/// Multi-step forecast in the history's units. Each step's prediction is
/// appended to the working history before the next step's features are built.
std::vector<StepForecast> recursive_forecast(const gbt::BoostedEnsemble& model, const TimeSeries& history,
                                             std::size_t horizon);

}  // namespace proxycast
