#include "proxycast/pipeline.hpp"

#include "proxycast/csv.hpp"
#include "proxycast/error.hpp"
#include "proxycast/features.hpp"
#include "proxycast/forecast.hpp"
#include "proxycast/ingest.hpp"
#include "proxycast/model_io.hpp"
#include "proxycast/remote.hpp"
#include "proxycast/svg_chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace proxycast {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string level_label(double level) {
    const double pct = level * 100.0;
    char buf[32];
    if (std::abs(pct - std::round(pct)) < 1e-9) {
        std::snprintf(buf, sizeof buf, "%d", static_cast<int>(std::round(pct)));
    } else {
        std::snprintf(buf, sizeof buf, "%g", pct);
    }
    return buf;
}

std::string r2_text(const Metrics& m) { return m.r2 ? csv::format_double(*m.r2) : "NA"; }

json metrics_json(const Metrics& m) {
    json j{{"rmse", m.rmse}, {"mae", m.mae}};
    j["r2"] = m.r2 ? json(*m.r2) : json(nullptr);
    return j;
}

void ensure_out_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) { csv::write_atomic(path, text); }

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<double> denormalized(std::span<const double> z, const NormalizationParams& p) {
    std::vector<double> out(z.size());
    std::transform(z.begin(), z.end(), out.begin(), [&](double v) { return p.invert(v); });
    return out;
}

}  // namespace

std::vector<std::string> forecast_columns(const std::string& proxy, double level) {
    const auto pct = level_label(level);
    return {"step", "Predicted_" + proxy, "Adjusted_CI_Lower_" + pct + "%", "Adjusted_CI_Upper_" + pct + "%"};
}

PreparedData prepare_data(const RunConfig& config, std::ostream& log) {
    PreparedData data;
    auto target = read_target_index(config.target);
    data.target = std::move(target.series);
    data.warnings = std::move(target.warnings);
    validate(data.target);

    std::vector<TimeSeries> raw;
    for (const auto& path : config.wide_files) {
        auto s = read_csv_series(path, CsvSchema::wide);
        raw.insert(raw.end(), std::make_move_iterator(s.begin()), std::make_move_iterator(s.end()));
    }
    for (const auto& src : config.ohlcv_files) {
        auto s = read_csv_series(src.path, CsvSchema::ohlcv, src.instrument);
        raw.insert(raw.end(), std::make_move_iterator(s.begin()), std::make_move_iterator(s.end()));
    }
    for (const auto& instrument : config.remote_instruments) {
        remote::FetchInfo info;
        const auto records = remote::fetch_remote_ohlcv(instrument, config.remote_range, config.endpoint, &info);
        if (!info.warning.empty()) data.warnings.push_back(info.warning);
        log << "remote " << instrument << ": " << records.size() << " records"
            << (info.from_cache ? " (cache)" : "") << '\n';
        auto s = ohlcv_to_series(records, instrument);
        raw.insert(raw.end(), std::make_move_iterator(s.begin()), std::make_move_iterator(s.end()));
    }

    std::set<std::string> ids;
    std::vector<TimeSeries> usable;
    for (auto& s : raw) {
        if (!ids.insert(s.id).second) throw DataError("duplicate candidate id '" + s.id + "'");
        try {
            validate(s);
            (void)z_normalize(s);
        } catch (const DataError& e) {
            data.warnings.push_back("candidate '" + s.id + "' skipped: " + e.what());
            continue;
        }
        for (const auto& cov : year_coverage(s)) {
            if (cov.days < kMinYearCoverage) {
                data.warnings.push_back("candidate '" + s.id + "' has only " + std::to_string(cov.days) +
                                        " observed days in " + std::to_string(cov.year));
            }
        }
        usable.push_back(std::move(s));
    }
    if (usable.empty()) throw DataError("no usable candidate series");

    const auto matrix = DataMatrix::from_series(usable);
    log << "imputing " << matrix.missing_count() << " of " << matrix.rows() * matrix.cols() << " cells across "
        << matrix.cols() << " candidates\n";
    const auto filled = impute_standardized(matrix, config.impute, &data.imputation);
    for (std::size_t c = 0; c < filled.cols(); ++c) data.candidates.push_back(filled.column_series(c));
    return data;
}

RankOutput rank_candidates(const PreparedData& data, const RunConfig& config) {
    RankOutput out;
    AnnualSeries target = data.target;
    if (config.normalize_annual) target.values = z_normalize(target.values);

    std::vector<AnnualSeries> annual;
    for (const auto& s : data.candidates) {
        auto a = restrict_years(annualize(s), target.years);
        if (config.normalize_annual && a.years == target.years) {
            try {
                a.values = z_normalize(a.values);
            } catch (const DataError&) {
                out.warnings.push_back("candidate '" + a.id + "' is constant over the target years; skipped");
                continue;
            }
        }
        annual.push_back(std::move(a));
    }
    for (auto method : config.methods) {
        out.rankings.push_back(rank_by_method(target, annual, method, config.similarity));
        for (const auto& id : out.rankings.back().excluded) {
            out.warnings.push_back("candidate '" + id + "' has a non-finite " +
                                   std::string(similarity::method_id(method)) + " distance; excluded from that ranking");
        }
    }
    out.consensus = consensus_select(out.rankings, config.top_k);
    return out;
}

RankOutput cmd_rank(const RunConfig& config, std::ostream& log, const PreparedData* prepared) {
    validate(config);
    PreparedData local;
    if (!prepared) {
        local = prepare_data(config, log);
        prepared = &local;
    }
    auto out = rank_candidates(*prepared, config);
    std::vector<std::string> warnings = prepared->warnings;
    warnings.insert(warnings.end(), out.warnings.begin(), out.warnings.end());
    out.warnings = warnings;

    ensure_out_dir(config.out_dir);
    const auto& c = out.consensus;

    std::ostringstream table;
    for (std::size_t m = 0; m < c.methods.size(); ++m) {
        table << (m ? "," : "") << similarity::method_title(c.methods[m]);
    }
    table << '\n';
    for (std::size_t r = 0; r < c.k; ++r) {
        for (std::size_t m = 0; m < c.methods.size(); ++m) {
            table << (m ? "," : "") << (r < c.top_k[m].size() ? c.top_k[m][r] : "");
        }
        table << '\n';
    }
    write_text(config.out_dir / "ranking.csv", table.str());

    std::vector<std::pair<std::string, int>> scores(c.borda.begin(), c.borda.end());
    std::stable_sort(scores.begin(), scores.end(), [&](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return c.top1.at(a.first) > c.top1.at(b.first);
    });
    std::ostringstream consensus;
    consensus << "candidate,borda,top1\n";
    for (const auto& [id, score] : scores) consensus << id << ',' << score << ',' << c.top1.at(id) << '\n';
    write_text(config.out_dir / "consensus.csv", consensus.str());

    json doc;
    doc["winner"] = c.winner;
    doc["k"] = c.k;
    doc["borda"] = c.borda;
    doc["top1"] = c.top1;
    doc["table"] = c.top_k;
    json methods = json::array();
    for (const auto& ranking : out.rankings) {
        json m;
        m["id"] = similarity::method_id(ranking.method);
        m["title"] = similarity::method_title(ranking.method);
        json entries = json::array();
        for (const auto& e : ranking.entries) entries.push_back({{"candidate", e.candidate}, {"distance", e.distance}});
        m["entries"] = std::move(entries);
        m["excluded"] = ranking.excluded;
        methods.push_back(std::move(m));
    }
    doc["methods"] = std::move(methods);
    doc["settings"] = {{"epsilon", config.similarity.epsilon},
                       {"gamma", config.similarity.gamma},
                       {"band", config.similarity.band ? json(*config.similarity.band) : json(nullptr)},
                       {"normalize_annual", config.normalize_annual}};
    doc["target"] = {{"id", prepared->target.id}, {"years", prepared->target.years}};
    doc["warnings"] = out.warnings;
    write_text(config.out_dir / "ranking.json", doc.dump(1) + "\n");

    for (const auto& w : out.warnings) log << "warning: " << w << '\n';
    log << "proxy: " << c.winner << " (borda " << c.borda.at(c.winner) << ", top-1 in " << c.top1.at(c.winner)
        << " of " << c.methods.size() << ")\n";
    return out;
}

ForecastOutput forecast_series(const TimeSeries& series, const RunConfig& config) {
    validate(config);
    ForecastOutput out;
    out.proxy = series.id;
    const auto values = series.dense_values();
    const auto& spec = config.features;
    if (values.size() < spec.min_length() + 1) {
        throw DataError("series '" + series.id + "' is too short to forecast: need at least " +
                        std::to_string(spec.min_length() + 1) + " observations");
    }

    // scale from the training rows only
    const std::size_t frame_rows = values.size() - spec.history_needed();
    const auto train_rows =
        static_cast<std::size_t>(std::ceil(config.train_fraction * static_cast<double>(frame_rows) - 1e-9));
    const std::size_t train_end = std::min(values.size(), spec.history_needed() + std::max<std::size_t>(train_rows, 2));
    const auto norm = fit_normalization(std::span<const double>(values).first(train_end));

    TimeSeries scaled = series;
    for (auto& v : scaled.values) v = norm.apply(*v);
    const auto frame = build_features(scaled, spec);
    const auto [train, test] = chrono_split(frame, config.train_fraction);

    out.grid = gbt::grid_search(train, config.grid, config.folds, config.seed);
    auto fit = gbt::fit_boosted_ensemble(train, out.grid.best, config.seed);
    fit.model.feature_spec = spec;
    fit.model.normalization = norm;
    gbt::verify_leaf_weights(fit.model);
    out.model = fit.model;

    const auto train_actual = denormalized(train.targets, norm);
    out.train = compute_metrics(train_actual, denormalized(fit.train_predictions, norm));

    out.test_dates = test.dates;
    out.test_actual = denormalized(test.targets, norm);
    out.test_predicted = denormalized(gbt::predict(out.model, test.features), norm);
    out.test = compute_metrics(out.test_actual, out.test_predicted);
    out.offsets = residual_quantiles(out.test_actual, out.test_predicted, config.level);

    const auto steps = recursive_forecast(out.model, series, config.horizon);
    std::vector<double> points;
    for (const auto& s : steps) {
        out.forecast_dates.push_back(s.date);
        points.push_back(s.value);
    }
    out.intervals = build_intervals(points, out.offsets, config.inflation, config.level);
    const bool straddles = out.offsets.low <= 0.0 && out.offsets.high >= 0.0;
    for (const auto& row : out.intervals) {
        if (!(row.lower <= row.upper) || (straddles && !(row.lower <= row.point && row.point <= row.upper))) {
            throw NumericError("interval for step " + std::to_string(row.step) + " is inconsistent");
        }
    }
    return out;
}

ForecastOutput cmd_forecast(const RunConfig& config, std::ostream& log, const PreparedData* prepared) {
    validate(config);
    std::string proxy = config.proxy;
    if (proxy.empty()) {
        const auto ranking = config.out_dir / "ranking.json";
        if (!fs::exists(ranking)) {
            throw ConfigError("no proxy given: set training.proxy or run 'rank' first (expected " + ranking.string() + ")");
        }
        try {
            proxy = json::parse(read_text(ranking)).at("winner").get<std::string>();
        } catch (const json::exception& e) {
            throw DataError("cannot read winner from '" + ranking.string() + "': " + e.what());
        }
    }

    PreparedData local;
    if (!prepared) {
        local = prepare_data(config, log);
        prepared = &local;
    }
    const auto it = std::find_if(prepared->candidates.begin(), prepared->candidates.end(),
                                 [&](const TimeSeries& s) { return s.id == proxy; });
    if (it == prepared->candidates.end()) throw DataError("proxy '" + proxy + "' is not among the loaded candidates");

    log << "forecasting " << proxy << ": grid of " << config.grid.size() << " configs, " << config.folds
        << " folds\n";
    auto out = forecast_series(*it, config);
    ensure_out_dir(config.out_dir);

    std::ostringstream metrics;
    metrics << ",RMSE,MAE,R^2\n";
    metrics << "train," << csv::format_double(out.train.rmse) << ',' << csv::format_double(out.train.mae) << ','
            << r2_text(out.train) << '\n';
    metrics << "test," << csv::format_double(out.test.rmse) << ',' << csv::format_double(out.test.mae) << ','
            << r2_text(out.test) << '\n';
    write_text(config.out_dir / "metrics.csv", metrics.str());

    const auto& best = out.grid.best;
    json mdoc;
    mdoc["proxy"] = proxy;
    mdoc["train"] = metrics_json(out.train);
    mdoc["test"] = metrics_json(out.test);
    mdoc["best_params"] = {{"rounds", best.rounds},         {"max_depth", best.max_depth},
                           {"learning_rate", best.learning_rate}, {"lambda", best.lambda},
                           {"alpha", best.alpha},           {"gamma", best.gamma},
                           {"min_child_weight", best.min_child_weight}};
    mdoc["train_fraction"] = config.train_fraction;
    mdoc["folds"] = config.folds;
    mdoc["seed"] = config.seed;
    write_text(config.out_dir / "metrics.json", mdoc.dump(1) + "\n");

    gbt::save_model(out.model, config.out_dir / "model.json");

    std::ostringstream grid;
    grid << "rounds,max_depth,learning_rate,lambda,alpha,gamma,min_child_weight,mean_rmse";
    for (std::size_t f = 0; f < config.folds; ++f) grid << ",fold" << f + 1 << "_rmse";
    grid << '\n';
    for (const auto& s : out.grid.scores) {
        grid << s.params.rounds << ',' << s.params.max_depth << ',' << csv::format_double(s.params.learning_rate) << ','
             << csv::format_double(s.params.lambda) << ',' << csv::format_double(s.params.alpha) << ','
             << csv::format_double(s.params.gamma) << ',' << csv::format_double(s.params.min_child_weight) << ','
             << csv::format_double(s.mean_rmse);
        for (double r : s.fold_rmse) grid << ',' << csv::format_double(r);
        grid << '\n';
    }
    write_text(config.out_dir / "grid_scores.csv", grid.str());

    std::ostringstream preds;
    preds << "date,actual,predicted\n";
    for (std::size_t i = 0; i < out.test_dates.size(); ++i) {
        preds << format_iso_date(out.test_dates[i]) << ',' << csv::format_double(out.test_actual[i]) << ','
              << csv::format_double(out.test_predicted[i]) << '\n';
    }
    write_text(config.out_dir / "test_predictions.csv", preds.str());

    const auto columns = forecast_columns(proxy, config.level);
    std::ostringstream fc;
    for (std::size_t i = 0; i < columns.size(); ++i) fc << (i ? "," : "") << columns[i];
    fc << '\n';
    json rows = json::array();
    for (std::size_t i = 0; i < out.intervals.size(); ++i) {
        const auto& r = out.intervals[i];
        fc << r.step << ',' << csv::format_double(r.point) << ',' << csv::format_double(r.lower) << ','
           << csv::format_double(r.upper) << '\n';
        rows.push_back({{columns[0], r.step},
                        {"date", format_iso_date(out.forecast_dates[i])},
                        {columns[1], r.point},
                        {columns[2], r.lower},
                        {columns[3], r.upper}});
    }
    write_text(config.out_dir / "forecast.csv", fc.str());

    json fdoc;
    fdoc["proxy"] = proxy;
    fdoc["level"] = config.level;
    fdoc["inflation"] = config.inflation;
    fdoc["horizon"] = config.horizon;
    fdoc["columns"] = columns;
    fdoc["residual_offsets"] = {{"low", out.offsets.low}, {"high", out.offsets.high}};
    fdoc["rows"] = std::move(rows);
    write_text(config.out_dir / "forecast.json", fdoc.dump(1) + "\n");

    log << "test R^2 " << r2_text(out.test) << ", RMSE " << csv::format_double(out.test.rmse) << "; intervals inflated by "
        << csv::format_double(config.inflation) << '\n';
    return out;
}

bool cmd_report(const RunConfig& config, std::ostream& log) {
    validate(config);
    const auto preds_path = config.out_dir / "test_predictions.csv";
    const auto forecast_path = config.out_dir / "forecast.csv";
    const auto meta_path = config.out_dir / "forecast.json";
    for (const auto& p : {preds_path, forecast_path, meta_path}) {
        if (!fs::exists(p)) {
            throw DataError("report needs forecast outputs; missing '" + p.string() +
                            "' (expected test_predictions.csv, forecast.csv, forecast.json)");
        }
    }
    ChartData chart;
    try {
        const auto meta = json::parse(read_text(meta_path));
        chart.proxy = meta.at("proxy").get<std::string>();
        chart.level = meta.at("level").get<double>();
        chart.inflation = meta.at("inflation").get<double>();
    } catch (const json::exception& e) {
        throw DataError("malformed '" + meta_path.string() + "': " + e.what());
    }
    chart.title = "Forecast report for " + chart.proxy;

    auto number = [](const std::string& cell, const fs::path& path) {
        try {
            std::size_t used = 0;
            const double v = std::stod(cell, &used);
            if (used != cell.size()) throw std::invalid_argument(cell);
            return v;
        } catch (const std::exception&) {
            throw DataError("'" + path.string() + "': bad number '" + cell + "'");
        }
    };
    const auto preds = csv::read_file(preds_path);
    for (const auto& row : preds.rows) {
        if (row.size() < 3) throw DataError("'" + preds_path.string() + "': short row");
        chart.test_labels.push_back(row[0]);
        chart.actual.push_back(number(row[1], preds_path));
        chart.predicted.push_back(number(row[2], preds_path));
    }
    const auto fc = csv::read_file(forecast_path);
    for (const auto& row : fc.rows) {
        if (row.size() < 4) throw DataError("'" + forecast_path.string() + "': short row");
        chart.point.push_back(number(row[1], forecast_path));
        chart.lower.push_back(number(row[2], forecast_path));
        chart.upper.push_back(number(row[3], forecast_path));
    }
    if (chart.actual.empty()) {
        log << "warning: test window is empty; chart not written\n";
        return false;
    }
    write_text(config.out_dir / "chart.svg", render_forecast_svg(chart));
    log << "wrote " << (config.out_dir / "chart.svg").string() << '\n';
    return true;
}

}  // namespace proxycast
