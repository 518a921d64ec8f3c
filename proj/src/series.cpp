#include "proxycast/series.hpp"

#include "proxycast/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace proxycast {

std::size_t TimeSeries::observed_count() const {
    return static_cast<std::size_t>(
        std::count_if(values.begin(), values.end(), [](const auto& v) { return v.has_value(); }));
}

bool TimeSeries::fully_observed() const { return observed_count() == values.size(); }

std::vector<double> TimeSeries::dense_values() const {
    std::vector<double> out;
    out.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!values[i]) {
            throw DataError("series '" + id + "' has a missing value at " + format_iso_date(dates[i]) +
                            "; impute first");
        }
        out.push_back(*values[i]);
    }
    return out;
}

TimeSeries TimeSeries::from_values(std::string id, std::vector<Date> dates, std::span<const double> values) {
    TimeSeries s;
    s.id = std::move(id);
    s.dates = std::move(dates);
    s.values.assign(values.begin(), values.end());
    return s;
}

void validate(const TimeSeries& series) {
    if (series.dates.size() != series.values.size()) {
        throw DataError("series '" + series.id + "': dates and values differ in length");
    }
    for (std::size_t i = 1; i < series.dates.size(); ++i) {
        if (!(series.dates[i - 1] < series.dates[i])) {
            throw DataError("series '" + series.id + "': dates not strictly increasing at " +
                            format_iso_date(series.dates[i]));
        }
    }
    for (const auto& v : series.values) {
        if (v && !std::isfinite(*v)) throw DataError("series '" + series.id + "' has a non-finite value");
    }
    if (series.observed_count() < 2) {
        throw DataError("series '" + series.id + "' needs at least 2 observed values");
    }
}

void validate(const AnnualSeries& series) {
    if (series.years.size() != series.values.size()) {
        throw DataError("annual series '" + series.id + "': years and values differ in length");
    }
    for (std::size_t i = 1; i < series.years.size(); ++i) {
        if (series.years[i - 1] >= series.years[i]) {
            throw DataError("annual series '" + series.id + "': years not strictly increasing");
        }
    }
    for (double v : series.values) {
        if (!std::isfinite(v)) throw DataError("annual series '" + series.id + "' has a non-finite value");
    }
}

std::size_t DataMatrix::missing_count() const {
    std::size_t n = 0;
    for (const auto& col : observed) n += static_cast<std::size_t>(std::count(col.begin(), col.end(), false));
    return n;
}

DataMatrix DataMatrix::from_series(std::span<const TimeSeries> series) {
    DataMatrix m;
    std::vector<Date> all;
    for (const auto& s : series) all.insert(all.end(), s.dates.begin(), s.dates.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    m.row_dates = std::move(all);

    for (const auto& s : series) {
        m.column_ids.push_back(s.id);
        std::vector<double> values(m.rows(), 0.0);
        std::vector<bool> mask(m.rows(), false);
        std::size_t r = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            while (m.row_dates[r] < s.dates[i]) ++r;
            if (s.values[i]) {
                values[r] = *s.values[i];
                mask[r] = true;
            }
        }
        m.columns.push_back(std::move(values));
        m.observed.push_back(std::move(mask));
    }
    return m;
}

TimeSeries DataMatrix::column_series(std::size_t c) const {
    TimeSeries s;
    s.id = column_ids.at(c);
    s.dates = row_dates;
    s.values.resize(rows());
    for (std::size_t r = 0; r < rows(); ++r) {
        if (observed[c][r]) s.values[r] = columns[c][r];
    }
    return s;
}

void validate(const DataMatrix& m) {
    if (m.cols() == 0 || m.rows() == 0) throw DataError("data matrix is empty");
    if (m.columns.size() != m.cols() || m.observed.size() != m.cols()) {
        throw DataError("data matrix: column count mismatch");
    }
    for (std::size_t c = 0; c < m.cols(); ++c) {
        if (m.columns[c].size() != m.rows() || m.observed[c].size() != m.rows()) {
            throw DataError("data matrix: column '" + m.column_ids[c] + "' has wrong length");
        }
        std::size_t seen = 0;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (!m.observed[c][r]) continue;
            ++seen;
            if (!std::isfinite(m.columns[c][r])) {
                throw DataError("data matrix: non-finite value in column '" + m.column_ids[c] + "'");
            }
        }
        if (seen < 2) throw DataError("data matrix: column '" + m.column_ids[c] + "' has fewer than 2 observed cells");
    }
}

NormalizationParams fit_normalization(std::span<const double> values) {
    if (values.size() < 2) throw DataError("normalization needs at least 2 values");
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(values.size()));
    if (!(sd > 0.0)) throw DataError("zero variance: cannot standardize a constant series");
    return {mean, sd};
}

std::vector<double> z_normalize(std::span<const double> values) {
    const auto p = fit_normalization(values);
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(), [&](double v) { return p.apply(v); });
    return out;
}

NormalizedSeries z_normalize(const TimeSeries& series) {
    std::vector<double> observed;
    for (const auto& v : series.values) {
        if (v) observed.push_back(*v);
    }
    if (observed.size() < 2) throw DataError("series '" + series.id + "' needs at least 2 observed values");
    NormalizedSeries out;
    try {
        out.params = fit_normalization(observed);
    } catch (const DataError&) {
        throw DataError("series '" + series.id + "' has zero variance");
    }
    out.series = series;
    for (auto& v : out.series.values) {
        if (v) v = out.params.apply(*v);
    }
    return out;
}

TimeSeries denormalize(const TimeSeries& series, const NormalizationParams& params) {
    TimeSeries out = series;
    for (auto& v : out.values) {
        if (v) v = params.invert(*v);
    }
    return out;
}

AnnualSeries annualize(const TimeSeries& series) {
    const auto values = series.dense_values();
    struct Bucket {
        double sum = 0.0;
        double lo = 0.0;
        double hi = 0.0;
        std::size_t n = 0;
    };
    std::map<int, Bucket> acc;
    for (std::size_t i = 0; i < values.size(); ++i) {
        auto& b = acc[year_of(series.dates[i])];
        b.lo = b.n == 0 ? values[i] : std::min(b.lo, values[i]);
        b.hi = b.n == 0 ? values[i] : std::max(b.hi, values[i]);
        b.sum += values[i];
        ++b.n;
    }
    AnnualSeries out;
    out.id = series.id;
    for (const auto& [year, b] : acc) {
        out.years.push_back(year);
        // rounding in the sum can push the mean a ulp outside the range
        out.values.push_back(std::clamp(b.sum / static_cast<double>(b.n), b.lo, b.hi));
    }
    return out;
}

std::vector<YearCoverage> year_coverage(const TimeSeries& series) {
    std::map<int, std::size_t> days;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series.values[i]) ++days[year_of(series.dates[i])];
    }
    std::vector<YearCoverage> out;
    for (const auto& [y, n] : days) out.push_back({y, n});
    return out;
}

AnnualSeries restrict_years(const AnnualSeries& series, std::span<const int> years) {
    AnnualSeries out;
    out.id = series.id;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (std::find(years.begin(), years.end(), series.years[i]) != years.end()) {
            out.years.push_back(series.years[i]);
            out.values.push_back(series.values[i]);
        }
    }
    return out;
}

}  // namespace proxycast
