#include "proxycast/ingest.hpp"

#include "proxycast/csv.hpp"
#include "proxycast/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace proxycast {

namespace {

std::optional<double> parse_cell(const std::string& cell, const std::filesystem::path& path, std::size_t line) {
    if (cell.empty()) return std::nullopt;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        const std::string lowered = [&] {
            std::string s = cell;
            std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
            return s;
        }();
        if (lowered == "na" || lowered == "nan" || lowered == "null") return std::nullopt;
        throw DataError(path.string() + ":" + std::to_string(line) + ": cannot parse number '" + cell + "'");
    }
    if (!std::isfinite(v)) return std::nullopt;
    return v;
}

std::string normalize_header(std::string name) {
    std::string out;
    for (unsigned char c : name) {
        if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

}  // namespace

void validate(const OhlcvRecord& r) {
    if (r.low && r.high && *r.low > *r.high) {
        throw DataError("record " + format_iso_date(r.date) + ": low exceeds high");
    }
    if (r.volume && *r.volume < 0.0) throw DataError("record " + format_iso_date(r.date) + ": negative volume");
}

std::string candidate_id(std::string_view field, std::string_view instrument) {
    return std::string(field) + "_" + std::string(instrument);
}

void CandidateCatalog::add(std::string instrument, std::string field) {
    const auto id = candidate_id(field, instrument);
    for (const auto& [i, f] : entries_) {
        if (candidate_id(f, i) == id) throw ConfigError("duplicate candidate id '" + id + "'");
    }
    entries_.emplace_back(std::move(instrument), std::move(field));
}

void CandidateCatalog::add_instrument(const std::string& instrument) {
    for (const char* f : kOhlcvFields) add(instrument, f);
}

std::vector<std::string> CandidateCatalog::ids() const {
    std::vector<std::string> out;
    for (const auto& [i, f] : entries_) out.push_back(candidate_id(f, i));
    return out;
}

CandidateCatalog CandidateCatalog::defaults() {
    CandidateCatalog c;
    for (const char* inst : {"Brent", "WTI", "WTI_Oil_ETF", "RBOB_Gasoline", "Heating_Oil", "Energy_Sector_ETF",
                             "Oil_Services_ETF"}) {
        c.add_instrument(inst);
    }
    return c;
}

std::vector<TimeSeries> ohlcv_to_series(std::span<const OhlcvRecord> records, const std::string& instrument) {
    std::vector<TimeSeries> out;
    for (const char* f : kOhlcvFields) out.push_back(TimeSeries{candidate_id(f, instrument), {}, {}});
    for (const auto& r : records) {
        const std::optional<double> fields[] = {r.open, r.high, r.low, r.close, r.adj_close, r.volume};
        for (std::size_t k = 0; k < out.size(); ++k) {
            out[k].dates.push_back(r.date);
            out[k].values.push_back(fields[k]);
        }
    }
    return out;
}

std::vector<TimeSeries> read_csv_series(const std::filesystem::path& path, CsvSchema schema,
                                        const std::string& instrument) {
    const auto table = csv::read_file(path);
    if (table.header.size() < 2) throw DataError("'" + path.string() + "' needs a date column and a value column");
    if (table.rows.empty()) throw DataError("'" + path.string() + "' has no data rows");

    std::vector<std::string> ids;
    std::vector<std::size_t> source_columns;
    if (schema == CsvSchema::wide) {
        std::set<std::string> seen;
        for (std::size_t c = 1; c < table.header.size(); ++c) {
            if (table.header[c].empty()) throw DataError("'" + path.string() + "': empty column name");
            if (!seen.insert(table.header[c]).second) {
                throw DataError("'" + path.string() + "': duplicate column '" + table.header[c] + "'");
            }
            ids.push_back(table.header[c]);
            source_columns.push_back(c);
        }
    } else {
        if (instrument.empty()) throw ConfigError("OHLCV file '" + path.string() + "' needs an instrument name");
        std::map<std::string, std::size_t> by_name;
        for (std::size_t c = 1; c < table.header.size(); ++c) by_name[normalize_header(table.header[c])] = c;
        for (const char* f : kOhlcvFields) {
            const auto it = by_name.find(normalize_header(f));
            if (it == by_name.end()) {
                throw DataError("'" + path.string() + "': OHLCV column '" + std::string(f) + "' not found");
            }
            ids.push_back(candidate_id(f, instrument));
            source_columns.push_back(it->second);
        }
    }

    struct Row {
        Date date;
        std::size_t line;
        std::vector<std::optional<double>> values;
    };
    std::vector<Row> rows;
    std::vector<std::string> bad_lines;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& fields = table.rows[i];
        const std::size_t line = table.line_numbers[i];
        Date date;
        try {
            date = parse_iso_date(fields.at(0));
        } catch (const DataError&) {
            bad_lines.push_back(std::to_string(line));
            continue;
        }
        Row row{date, line, {}};
        for (std::size_t c : source_columns) {
            row.values.push_back(c < fields.size() ? parse_cell(fields[c], path, line) : std::nullopt);
        }
        rows.push_back(std::move(row));
    }
    if (!bad_lines.empty()) {
        std::ostringstream msg;
        msg << "'" << path.string() << "': unparseable date on line(s) ";
        for (std::size_t i = 0; i < bad_lines.size(); ++i) msg << (i ? ", " : "") << bad_lines[i];
        throw DataError(msg.str());
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i - 1].date == rows[i].date) {
            throw DataError("'" + path.string() + "': duplicate date " + format_iso_date(rows[i].date) + " on lines " +
                            std::to_string(rows[i - 1].line) + " and " + std::to_string(rows[i].line));
        }
    }

    std::vector<TimeSeries> out;
    for (std::size_t k = 0; k < ids.size(); ++k) {
        TimeSeries s{ids[k], {}, {}};
        for (const auto& r : rows) {
            s.dates.push_back(r.date);
            s.values.push_back(r.values[k]);
        }
        out.push_back(std::move(s));
    }
    return out;
}

void write_csv_series(const std::filesystem::path& path, std::span<const TimeSeries> series) {
    std::vector<Date> dates;
    for (const auto& s : series) dates.insert(dates.end(), s.dates.begin(), s.dates.end());
    std::sort(dates.begin(), dates.end());
    dates.erase(std::unique(dates.begin(), dates.end()), dates.end());

    std::ostringstream out;
    out << "date";
    for (const auto& s : series) out << ',' << s.id;
    out << '\n';
    std::vector<std::size_t> cursor(series.size(), 0);
    for (const auto& d : dates) {
        out << format_iso_date(d);
        for (std::size_t k = 0; k < series.size(); ++k) {
            out << ',';
            const auto& s = series[k];
            if (cursor[k] < s.size() && s.dates[cursor[k]] == d) {
                if (s.values[cursor[k]]) out << csv::format_double(*s.values[cursor[k]]);
                ++cursor[k];
            }
        }
        out << '\n';
    }
    csv::write_atomic(path, out.str());
}

TargetIndex read_target_index(const std::filesystem::path& path) {
    const auto table = csv::read_file(path);
    if (table.header.size() < 2 || normalize_header(table.header[0]) != "year" ||
        normalize_header(table.header[1]) != "value") {
        throw DataError("'" + path.string() + "': expected a 'year,value' header");
    }
    std::vector<std::pair<int, double>> rows;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& f = table.rows[i];
        const std::size_t line = table.line_numbers[i];
        int year = 0;
        const std::string& y = f.at(0);
        auto [ptr, ec] = std::from_chars(y.data(), y.data() + y.size(), year);
        if (ec != std::errc{} || ptr != y.data() + y.size()) {
            throw DataError(path.string() + ":" + std::to_string(line) + ": bad year '" + y + "'");
        }
        const auto v = f.size() > 1 ? parse_cell(f[1], path, line) : std::nullopt;
        if (!v) throw DataError(path.string() + ":" + std::to_string(line) + ": missing value for " + y);
        rows.emplace_back(year, *v);
    }
    if (rows.empty()) throw DataError("'" + path.string() + "' has no data rows");
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    TargetIndex out;
    out.series.id = path.stem().string();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0 && rows[i].first == rows[i - 1].first) {
            throw DataError("'" + path.string() + "': duplicate year " + std::to_string(rows[i].first));
        }
        if (i > 0 && rows[i].first != rows[i - 1].first + 1) {
            out.warnings.push_back("target years are not consecutive: " + std::to_string(rows[i - 1].first) +
                                   " then " + std::to_string(rows[i].first));
        }
        out.series.years.push_back(rows[i].first);
        out.series.values.push_back(rows[i].second);
    }
    return out;
}

}  // namespace proxycast
