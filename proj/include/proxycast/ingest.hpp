#pragma once

#include "proxycast/date.hpp"
#include "proxycast/series.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace proxycast {

/// One daily market record; absent fields are nullopt.
struct OhlcvRecord {
    Date date;
    std::optional<double> open;
    std::optional<double> high;
    std::optional<double> low;
    std::optional<double> close;
    std::optional<double> adj_close;
    std::optional<double> volume;

    bool operator==(const OhlcvRecord&) const = default;
};

/// Throws DataError if low > high or volume < 0.
void validate(const OhlcvRecord& record);

/// Field names used in candidate ids, in column order.
inline constexpr const char* kOhlcvFields[] = {"Open", "High", "Low", "Close", "Adj_Close", "Volume"};

/// `<Field>_<Instrument>`, e.g. Volume_Brent.
std::string candidate_id(std::string_view field, std::string_view instrument);

/// (instrument, field) pairs expanded into unique candidate ids.
class CandidateCatalog {
public:
    void add(std::string instrument, std::string field);
    void add_instrument(const std::string& instrument);  // all six OHLCV fields
    [[nodiscard]] std::vector<std::string> ids() const;
    [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    /// Instruments named in the top rows of the reference ranking table.
    static CandidateCatalog defaults();

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

/// Six series (one per field) from sorted records.
std::vector<TimeSeries> ohlcv_to_series(std::span<const OhlcvRecord> records, const std::string& instrument);

enum class CsvSchema { wide, ohlcv };

/// wide: `date,<id>,<id>...`; ohlcv: `Date,Open,High,Low,Close,Adj Close,Volume`
/// for `instrument`. Blank cells are missing. Rows are sorted by date;
/// unparseable dates and duplicate dates raise DataError with line numbers.
std::vector<TimeSeries> read_csv_series(const std::filesystem::path& path, CsvSchema schema,
                                        const std::string& instrument = {});

/// Wide CSV over the union of the series' dates.
void write_csv_series(const std::filesystem::path& path, std::span<const TimeSeries> series);

struct TargetIndex {
    AnnualSeries series;
    std::vector<std::string> warnings;
};

/// `year,value` CSV. Output sorted by year; gaps between years produce a warning.
TargetIndex read_target_index(const std::filesystem::path& path);

}  // namespace proxycast
