// Writes the bundled synthetic dataset: an annual target index, a wide CSV
// of distractor candidates, one OHLCV CSV, and a recorded chart response for
// a remote instrument whose daily volume tracks the target.
//
//   make_fixture [output-dir]

#include "proxycast/csv.hpp"
#include "proxycast/date.hpp"
#include "proxycast/remote.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace fs = std::filesystem;
using namespace proxycast;

namespace {

constexpr int kFirstYear = 2011;
constexpr double kMissingRate = 0.01;
constexpr std::int64_t kRecordedAt = 1704153600;  // 2024-01-02

const std::vector<double> kTargetIndex{112.4, 118.9, 121.3, 119.8, 104.6, 98.2, 106.5,
                                       115.7, 117.2, 91.8,  109.4, 126.1, 122.7};

struct Bar {
    double open, high, low, close, adj_close, volume;
};

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::vector<Date> business_days() {
    std::vector<Date> out;
    const Date end = parse_iso_date("2023-12-31");
    for (Date d = parse_iso_date("2011-01-01"); d <= end; d = add_days(d, 1)) {
        if (!is_weekend(d)) out.push_back(d);
    }
    return out;
}

std::vector<double> target_z() {
    const double n = static_cast<double>(kTargetIndex.size());
    const double mean = std::accumulate(kTargetIndex.begin(), kTargetIndex.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : kTargetIndex) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / n);
    std::vector<double> z;
    for (double v : kTargetIndex) z.push_back((v - mean) / sd);
    return z;
}

class Generator {
public:
    explicit Generator(std::uint64_t seed) : rng_(seed) {}

    double normal(double sd = 1.0) { return std::normal_distribution<double>(0.0, sd)(rng_); }
    bool missing() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < kMissingRate; }

    std::vector<double> random_walk(std::size_t n, double start, double vol) {
        std::vector<double> out(n);
        double level = std::log(start);
        for (auto& v : out) {
            level += normal(vol);
            v = std::exp(level);
        }
        return out;
    }

    std::vector<double> mean_reverting(std::size_t n, double centre, double speed, double vol) {
        std::vector<double> out(n);
        double x = centre;
        for (auto& v : out) {
            x += speed * (centre - x) + normal(vol);
            v = x;
        }
        return out;
    }

    std::vector<Bar> bars(const std::vector<double>& closes, const std::vector<double>& volume) {
        std::vector<Bar> out;
        double prev = closes.front();
        for (std::size_t i = 0; i < closes.size(); ++i) {
            Bar b{};
            b.open = prev * (1.0 + normal(0.004));
            b.close = closes[i];
            b.high = std::max(b.open, b.close) * (1.0 + std::abs(normal(0.006)));
            b.low = std::min(b.open, b.close) * (1.0 - std::abs(normal(0.006)));
            b.adj_close = b.close * 0.985;
            b.volume = std::round(volume[i]);
            out.push_back(b);
            prev = b.close;
        }
        return out;
    }

private:
    std::mt19937_64 rng_;
};

// daily values whose calendar-year means equal `annual` exactly before rounding
std::vector<double> daily_around(const std::vector<Date>& dates, const std::vector<double>& annual,
                                 std::vector<double> wiggle) {
    std::map<int, std::pair<double, int>> sums;
    for (std::size_t i = 0; i < dates.size(); ++i) {
        auto& [s, n] = sums[year_of(dates[i])];
        s += wiggle[i];
        ++n;
    }
    for (std::size_t i = 0; i < dates.size(); ++i) {
        const int y = year_of(dates[i]);
        const auto& [s, n] = sums[y];
        wiggle[i] += annual[static_cast<std::size_t>(y - kFirstYear)] - s / n;
    }
    return wiggle;
}

std::vector<double> weekly_ar(Generator& g, const std::vector<Date>& dates, double phi, double sd) {
    static const double kWeekday[7] = {0.0, 320.0, 90.0, 0.0, -60.0, -350.0, 0.0};
    std::vector<double> out(dates.size());
    double x = 0.0;
    for (std::size_t i = 0; i < dates.size(); ++i) {
        x = phi * x + g.normal(sd);
        out[i] = x + kWeekday[weekday_index(dates[i])];
    }
    return out;
}

std::string chart_body(const std::vector<Date>& dates, const std::vector<Bar>& bars, Generator& g) {
    using nlohmann::json;
    json ts = json::array(), open = json::array(), high = json::array(), low = json::array(),
         close = json::array(), adj = json::array(), volume = json::array();
    auto cell = [&](double v, int digits) -> json {
        if (g.missing()) return nullptr;
        return json::parse(fixed(v, digits));
    };
    for (std::size_t i = 0; i < dates.size(); ++i) {
        ts.push_back(epoch_days(dates[i]) * 86400 + 4 * 3600);
        open.push_back(cell(bars[i].open, 4));
        high.push_back(cell(bars[i].high, 4));
        low.push_back(cell(bars[i].low, 4));
        close.push_back(cell(bars[i].close, 4));
        adj.push_back(cell(bars[i].adj_close, 4));
        volume.push_back(cell(bars[i].volume, 0));
    }
    json quote{{"open", open}, {"high", high}, {"low", low}, {"close", close}, {"volume", volume}};
    json result{{"meta", {{"symbol", "Brent"}, {"currency", "USD"}, {"dataGranularity", "1d"}}},
                {"timestamp", ts},
                {"indicators", {{"quote", json::array({quote})}, {"adjclose", json::array({{{"adjclose", adj}}})}}}};
    json doc{{"chart", {{"result", json::array({result})}, {"error", nullptr}}}};
    return doc.dump();
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path out = argc > 1 ? fs::path(argv[1]) : fs::path(PROXYCAST_FIXTURE_DIR);
    fs::create_directories(out);
    Generator g(20240101);
    const auto dates = business_days();
    const std::size_t n = dates.size();
    const auto z = target_z();

    // target
    {
        std::ostringstream s;
        s << "year,value\n";
        for (std::size_t i = 0; i < kTargetIndex.size(); ++i) s << kFirstYear + static_cast<int>(i) << ',' << fixed(kTargetIndex[i], 1) << '\n';
        csv::write_atomic(out / "target.csv", s.str());
    }

    // wide distractors
    {
        std::vector<std::pair<std::string, std::vector<double>>> cols;
        cols.emplace_back("Gold_Spot", g.random_walk(n, 1400.0, 0.009));
        cols.emplace_back("Copper_Futures", g.random_walk(n, 4.1, 0.014));
        cols.emplace_back("USD_Index", g.random_walk(n, 79.0, 0.004));
        cols.emplace_back("Treasury_10Y", g.mean_reverting(n, 2.4, 0.01, 0.05));
        cols.emplace_back("Natural_Gas", g.random_walk(n, 4.3, 0.03));
        std::vector<double> freight(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double doy = static_cast<double>(epoch_days(dates[i]) % 365);
            freight[i] = 1800.0 + 400.0 * std::sin(2.0 * M_PI * doy / 365.0) + g.normal(120.0);
        }
        cols.emplace_back("Freight_Rate", freight);
        std::vector<double> mirrored, noisy;
        for (double v : z) mirrored.push_back(90.0 - 8.0 * v + g.normal(0.8));
        for (double v : z) noisy.push_back(50.0 + 5.0 * (v + g.normal(1.0)));
        cols.emplace_back("Consumer_Sentiment", daily_around(dates, mirrored, g.mean_reverting(n, 0.0, 0.1, 1.5)));
        cols.emplace_back("Retail_Footfall", daily_around(dates, noisy, g.mean_reverting(n, 0.0, 0.2, 2.0)));

        std::ostringstream s;
        s << "date";
        for (const auto& [name, _] : cols) s << ',' << name;
        s << '\n';
        for (std::size_t i = 0; i < n; ++i) {
            s << format_iso_date(dates[i]);
            for (const auto& [_, values] : cols) s << ',' << (g.missing() ? std::string("NA") : fixed(values[i], 4));
            s << '\n';
        }
        csv::write_atomic(out / "candidates_wide.csv", s.str());
    }

    // WTI daily bars; exchange holidays on Jan 1 and Dec 25 are absent
    {
        const auto closes = g.random_walk(n, 91.0, 0.021);
        auto volume = g.mean_reverting(n, 260000.0, 0.05, 18000.0);
        for (std::size_t i = 0; i < n; ++i) volume[i] += 900.0 * static_cast<double>(i) / 260.0;
        const auto bars = g.bars(closes, volume);
        std::ostringstream s;
        s << "Date,Open,High,Low,Close,Adj Close,Volume\n";
        for (std::size_t i = 0; i < n; ++i) {
            const auto& d = dates[i];
            if ((d.month() == std::chrono::January && d.day() == std::chrono::day{1}) ||
                (d.month() == std::chrono::December && d.day() == std::chrono::day{25})) {
                continue;
            }
            const auto& b = bars[i];
            auto cell = [&](double v, int digits) { return g.missing() ? std::string() : fixed(v, digits); };
            s << format_iso_date(d) << ',' << cell(b.open, 4) << ',' << cell(b.high, 4) << ',' << cell(b.low, 4)
              << ',' << cell(b.close, 4) << ',' << cell(b.adj_close, 4) << ',' << cell(b.volume, 0) << '\n';
        }
        csv::write_atomic(out / "ohlcv_WTI.csv", s.str());
    }

    // Brent via the recorded chart endpoint; volume carries the target's shape
    {
        const auto closes = g.random_walk(n, 96.0, 0.02);
        std::vector<double> annual;
        for (double v : z) annual.push_back(15000.0 + 2000.0 * (v + g.normal(0.1)));
        const auto volume = daily_around(dates, annual, weekly_ar(g, dates, 0.6, 450.0));
        const auto bars = g.bars(closes, volume);
        const auto body = chart_body(dates, bars, g);
        const remote::DateRange range{parse_iso_date("2011-01-01"), parse_iso_date("2023-12-31")};
        const fs::path cache = out / "cache";
        fs::remove_all(cache);
        remote::ResponseCache(cache).store("Brent", range, body, kRecordedAt);
    }

    std::cout << "wrote fixture to " << out.string() << '\n';
    return 0;
}
