#pragma once

#include "proxycast/config.hpp"
#include "proxycast/gbt.hpp"
#include "proxycast/grid_search.hpp"
#include "proxycast/impute.hpp"
#include "proxycast/intervals.hpp"
#include "proxycast/metrics.hpp"
#include "proxycast/proxy_select.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace proxycast {

/// Candidates after loading, alignment, and imputation (original units).
struct PreparedData {
    AnnualSeries target;
    std::vector<TimeSeries> candidates;
    ImputationReport imputation;
    std::vector<std::string> warnings;
};

/// Loads the target and every configured candidate source, then imputes
/// gaps jointly across candidates.
PreparedData prepare_data(const RunConfig& config, std::ostream& log);

struct RankOutput {
    std::vector<MethodRanking> rankings;
    ConsensusResult consensus;
    std::vector<std::string> warnings;
};

/// Annualizes candidates, ranks them against the target under each method,
/// and picks the consensus proxy.
RankOutput rank_candidates(const PreparedData& data, const RunConfig& config);

/// Writes ranking.csv, ranking.json, and consensus.csv to the output dir.
RankOutput cmd_rank(const RunConfig& config, std::ostream& log, const PreparedData* prepared = nullptr);

struct ForecastOutput {
    std::string proxy;
    gbt::GridSearchResult grid;
    gbt::BoostedEnsemble model;
    Metrics train;
    Metrics test;
    std::vector<Date> test_dates;
    std::vector<double> test_actual;
    std::vector<double> test_predicted;
    ResidualOffsets offsets;
    std::vector<Date> forecast_dates;
    std::vector<IntervalForecast> intervals;
};

/// Trains on a chronological split of one daily series (original units) and
/// forecasts `config.horizon` steps with inflated residual intervals.
ForecastOutput forecast_series(const TimeSeries& series, const RunConfig& config);

/// Resolves the proxy (training.proxy, else ranking.json in the output dir),
/// then writes metrics.csv/json, model.json, grid_scores.csv,
/// test_predictions.csv, and forecast.csv/json.
ForecastOutput cmd_forecast(const RunConfig& config, std::ostream& log, const PreparedData* prepared = nullptr);

/// Renders chart.svg from the forecast outputs. Returns false (with a
/// warning) when the test window is empty and no chart was written.
bool cmd_report(const RunConfig& config, std::ostream& log);

/// Report column headings for a proxy id and interval level.
std::vector<std::string> forecast_columns(const std::string& proxy, double level);

}  // namespace proxycast
