#pragma once

#include "proxycast/date.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace proxycast {

/// Dated daily series. A value is either observed or missing (nullopt).
struct TimeSeries {
    std::string id;
    std::vector<Date> dates;
    std::vector<std::optional<double>> values;

    [[nodiscard]] std::size_t size() const noexcept { return dates.size(); }
    [[nodiscard]] std::size_t observed_count() const;
    [[nodiscard]] bool fully_observed() const;

    /// Observed values in date order; throws DataError if any cell is missing.
    [[nodiscard]] std::vector<double> dense_values() const;

    static TimeSeries from_values(std::string id, std::vector<Date> dates, std::span<const double> values);
};

/// Throws DataError when dates are not strictly increasing, lengths differ,
/// an observed value is non-finite, or fewer than two values are observed.
void validate(const TimeSeries& series);

/// Year-indexed means.
struct AnnualSeries {
    std::string id;
    std::vector<int> years;
    std::vector<double> values;

    [[nodiscard]] std::size_t size() const noexcept { return years.size(); }
};

void validate(const AnnualSeries& series);

/// Mean and population standard deviation recorded by z_normalize.
struct NormalizationParams {
    double mean = 0.0;
    double stddev = 1.0;

    [[nodiscard]] double apply(double x) const { return (x - mean) / stddev; }
    [[nodiscard]] double invert(double z) const { return z * stddev + mean; }
};

/// Column-major matrix with an observed-mask of identical shape.
struct DataMatrix {
    std::vector<std::string> column_ids;
    std::vector<Date> row_dates;
    std::vector<std::vector<double>> columns;     // columns[c][r]
    std::vector<std::vector<bool>> observed;      // observed[c][r]

    [[nodiscard]] std::size_t rows() const noexcept { return row_dates.size(); }
    [[nodiscard]] std::size_t cols() const noexcept { return column_ids.size(); }
    [[nodiscard]] std::size_t missing_count() const;

    /// Aligns series on the union of their dates; absent cells are missing.
    static DataMatrix from_series(std::span<const TimeSeries> series);
    [[nodiscard]] TimeSeries column_series(std::size_t c) const;
};

void validate(const DataMatrix& matrix);

struct NormalizedSeries {
    TimeSeries series;
    NormalizationParams params;
};

/// Standardizes observed values to mean 0 and population stddev 1.
/// Missing entries stay missing. Constant input raises DataError.
NormalizedSeries z_normalize(const TimeSeries& series);
NormalizationParams fit_normalization(std::span<const double> values);
std::vector<double> z_normalize(std::span<const double> values);
TimeSeries denormalize(const TimeSeries& series, const NormalizationParams& params);

/// Per-year arithmetic means. Requires a fully observed series.
AnnualSeries annualize(const TimeSeries& series);

/// Number of days contributing to each year of annualize(series).
struct YearCoverage {
    int year = 0;
    std::size_t days = 0;
};
std::vector<YearCoverage> year_coverage(const TimeSeries& series);

/// Years below this many observed days are annualized but reported.
inline constexpr std::size_t kMinYearCoverage = 30;

/// Drops every year not in `years`. Years absent from the series stay absent.
AnnualSeries restrict_years(const AnnualSeries& series, std::span<const int> years);

}  // namespace proxycast
