#include "proxycast/csv.hpp"
#include "proxycast/error.hpp"
#include "proxycast/ingest.hpp"

#include "catch_amalgamated.hpp"
#include "temp_dir.hpp"

using namespace proxycast;
using Catch::Matchers::ContainsSubstring;
using testing_support::TempDir;

namespace {

std::filesystem::path write(const TempDir& dir, const std::string& name, const std::string& text) {
    const auto p = dir / name;
    csv::write_atomic(p, text);
    return p;
}

}  // namespace

TEST_CASE("wide CSV with one column") {
    TempDir dir;
    const auto p = write(dir, "w.csv", "date,v\n2020-01-01,1\n2020-01-02,2.5\n2020-01-03,3\n");
    const auto s = read_csv_series(p, CsvSchema::wide);
    REQUIRE(s.size() == 1);
    CHECK(s[0].id == "v");
    CHECK(s[0].size() == 3);
    CHECK(*s[0].values[1] == 2.5);
}

TEST_CASE("blank and NA cells are missing, not zero") {
    TempDir dir;
    const auto p = write(dir, "w.csv", "date,a,b\n2020-01-01,,1\n2020-01-02,NA,2\n2020-01-03,0,\n");
    const auto s = read_csv_series(p, CsvSchema::wide);
    CHECK_FALSE(s[0].values[0].has_value());
    CHECK_FALSE(s[0].values[1].has_value());
    CHECK(*s[0].values[2] == 0.0);
    CHECK_FALSE(s[1].values[2].has_value());
}

TEST_CASE("OHLCV file expands to six candidates") {
    TempDir dir;
    const auto p = write(dir, "b.csv",
                         "Date,Open,High,Low,Close,Adj Close,Volume\n"
                         "2020-01-03,2,3,1,2.5,2.4,100\n"
                         "2020-01-02,1,2,0.5,1.5,1.4,90\n");
    const auto s = read_csv_series(p, CsvSchema::ohlcv, "Brent");
    REQUIRE(s.size() == 6);
    CHECK(s[0].id == "Open_Brent");
    CHECK(s[4].id == "Adj_Close_Brent");
    CHECK(s[5].id == "Volume_Brent");
    CHECK(s[5].dates.front() < s[5].dates.back());
    CHECK(*s[5].values.front() == 90.0);
}

TEST_CASE("bad dates and duplicates are reported with line numbers") {
    TempDir dir;
    auto p = write(dir, "bad.csv", "date,v\n2020-01-01,1\nyesterday,2\n2020-13-01,3\n");
    CHECK_THROWS_WITH(read_csv_series(p, CsvSchema::wide), ContainsSubstring("3, 4"));
    p = write(dir, "dup.csv", "date,v\n2020-01-01,1\n2020-01-02,2\n2020-01-01,3\n");
    CHECK_THROWS_WITH(read_csv_series(p, CsvSchema::wide), ContainsSubstring("lines 2 and 4"));
    p = write(dir, "empty.csv", "");
    CHECK_THROWS_AS(read_csv_series(p, CsvSchema::wide), DataError);
    CHECK_THROWS_AS(read_csv_series(dir / "absent.csv", CsvSchema::wide), DataError);
    p = write(dir, "num.csv", "date,v\n2020-01-01,abc\n");
    CHECK_THROWS_AS(read_csv_series(p, CsvSchema::wide), DataError);
}

TEST_CASE("wide CSV round trip") {
    TempDir dir;
    std::vector<TimeSeries> s{
        TimeSeries{"a", {parse_iso_date("2020-01-01"), parse_iso_date("2020-01-03")}, {1.25, std::nullopt}},
        TimeSeries{"b", {parse_iso_date("2020-01-02")}, {-3.0}}};
    write_csv_series(dir / "rt.csv", s);
    const auto back = read_csv_series(dir / "rt.csv", CsvSchema::wide);
    REQUIRE(back.size() == 2);
    CHECK(back[0].size() == 3);
    CHECK(*back[0].values[0] == 1.25);
    CHECK_FALSE(back[0].values[1].has_value());
    CHECK_FALSE(back[0].values[2].has_value());
    CHECK(*back[1].values[1] == -3.0);
}

TEST_CASE("target index") {
    TempDir dir;
    std::string text = "year,value\n";
    for (int y = 2023; y >= 2011; --y) text += std::to_string(y) + "," + std::to_string(100 + y % 7) + "\n";
    auto t = read_target_index(write(dir, "sales.csv", text));
    CHECK(t.series.size() == 13);
    CHECK(t.series.id == "sales");
    CHECK(t.series.years.front() == 2011);
    CHECK(t.warnings.empty());

    t = read_target_index(write(dir, "one.csv", "year,value\n2015,3\n"));
    CHECK(t.series.size() == 1);
    CHECK(t.warnings.empty());

    t = read_target_index(write(dir, "gap.csv", "year,value\n2011,1\n2013,2\n"));
    CHECK(t.warnings.size() == 1);

    CHECK_THROWS_WITH(read_target_index(write(dir, "dup.csv", "year,value\n2011,1\n2011,2\n")),
                      ContainsSubstring("duplicate year"));
    CHECK_THROWS_AS(read_target_index(write(dir, "hdr.csv", "when,amount\n2011,1\n")), DataError);
}

TEST_CASE("record validation and catalog") {
    OhlcvRecord r{parse_iso_date("2020-01-01"), 1.0, 1.0, 2.0, 1.0, 1.0, 5.0};
    CHECK_THROWS_AS(validate(r), DataError);
    r.low = 0.5;
    r.volume = -1.0;
    CHECK_THROWS_AS(validate(r), DataError);

    auto cat = CandidateCatalog::defaults();
    const auto ids = cat.ids();
    CHECK(std::find(ids.begin(), ids.end(), "Volume_Brent") != ids.end());
    std::set<std::string> unique(ids.begin(), ids.end());
    CHECK(unique.size() == ids.size());
    CHECK_THROWS_AS(cat.add("Brent", "Volume"), ConfigError);
}
