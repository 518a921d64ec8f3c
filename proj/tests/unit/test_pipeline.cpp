#include "proxycast/csv.hpp"
#include "proxycast/error.hpp"
#include "proxycast/model_io.hpp"
#include "proxycast/pipeline.hpp"

#include "catch_amalgamated.hpp"
#include "mini_dataset.hpp"
#include "temp_dir.hpp"

#include <fstream>
#include <regex>
#include <sstream>

using namespace proxycast;
using testing_support::TempDir;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

// start/end tags balance and nest; enough for the SVG the report writes
bool well_formed(const std::string& xml) {
    std::vector<std::string> stack;
    const std::regex tag(R"(<(/?)([A-Za-z][\w:-]*)[^>]*?(/?)>)");
    for (auto it = std::sregex_iterator(xml.begin(), xml.end(), tag); it != std::sregex_iterator(); ++it) {
        const auto& m = *it;
        if (m[3].length() > 0) continue;
        if (m[1].length() == 0) {
            stack.push_back(m[2]);
        } else {
            if (stack.empty() || stack.back() != m[2]) return false;
            stack.pop_back();
        }
    }
    return stack.empty() && xml.find("<svg") != std::string::npos;
}

struct Fixture {
    TempDir dir{"pipeline"};
    RunConfig config;
    Fixture() {
        testing_support::write_mini_dataset(dir.path());
        config = build_run_config(testing_support::mini_settings(dir.path()), dir.path());
    }
};

}  // namespace

TEST_CASE("rank picks the follower and writes a k-row table") {
    Fixture f;
    f.config.top_k = 3;
    std::ostringstream log;
    const auto out = cmd_rank(f.config, log);
    CHECK(out.consensus.winner == "Follower");
    const auto table = lines(slurp(f.config.out_dir / "ranking.csv"));
    REQUIRE(table.size() == 4);
    CHECK(table[0] == "Soft-DTW Distance,DTW Distance,LCSS,edr,hausdorff");
    for (std::size_t r = 1; r < table.size(); ++r) CHECK(csv::split_line(table[r]).size() == 5);
    CHECK(std::filesystem::exists(f.config.out_dir / "ranking.json"));
    CHECK(std::filesystem::exists(f.config.out_dir / "consensus.csv"));
}

TEST_CASE("forecast uses the ranked proxy and writes report files") {
    Fixture f;
    std::ostringstream log;
    cmd_rank(f.config, log);
    const auto out = cmd_forecast(f.config, log);
    CHECK(out.proxy == "Follower");
    const auto fc = lines(slurp(f.config.out_dir / "forecast.csv"));
    REQUIRE(fc.size() == 16);
    CHECK(fc[0] == "step,Predicted_Follower,Adjusted_CI_Lower_95%,Adjusted_CI_Upper_95%");
    const auto metrics = lines(slurp(f.config.out_dir / "metrics.csv"));
    REQUIRE(metrics.size() == 3);
    CHECK(metrics[0] == ",RMSE,MAE,R^2");
    CHECK(metrics[1].rfind("train,", 0) == 0);
    CHECK(metrics[2].rfind("test,", 0) == 0);
    for (const auto& r : out.intervals) {
        CHECK(r.lower <= r.point);
        CHECK(r.point <= r.upper);
    }
    const auto model = gbt::load_model(f.config.out_dir / "model.json");
    CHECK(model.trees.size() == out.model.trees.size());
}

TEST_CASE("reruns are byte-identical") {
    Fixture f;
    std::ostringstream log;
    f.config.proxy = "Follower";
    cmd_rank(f.config, log);
    cmd_forecast(f.config, log);
    const char* files[] = {"ranking.csv", "ranking.json", "consensus.csv", "forecast.csv", "forecast.json",
                           "metrics.csv", "metrics.json", "model.json", "grid_scores.csv", "test_predictions.csv"};
    std::vector<std::string> first;
    for (const char* name : files) first.push_back(slurp(f.config.out_dir / name));
    cmd_rank(f.config, log);
    cmd_forecast(f.config, log);
    for (std::size_t i = 0; i < std::size(files); ++i) {
        INFO(files[i]);
        CHECK(slurp(f.config.out_dir / files[i]) == first[i]);
    }
}

TEST_CASE("horizon one gives one row") {
    Fixture f;
    f.config.proxy = "Follower";
    f.config.horizon = 1;
    std::ostringstream log;
    cmd_forecast(f.config, log);
    CHECK(lines(slurp(f.config.out_dir / "forecast.csv")).size() == 2);
}

TEST_CASE("report renders the chart") {
    Fixture f;
    f.config.proxy = "Follower";
    std::ostringstream log;
    cmd_forecast(f.config, log);
    CHECK(cmd_report(f.config, log));
    const auto svg = slurp(f.config.out_dir / "chart.svg");
    CHECK_FALSE(svg.empty());
    CHECK(well_formed(svg));
    const std::regex fan(R"re(class="fan"[^>]*points="([^"]*)")re");
    std::smatch m;
    REQUIRE(std::regex_search(svg, m, fan));
    std::istringstream pts(m[1].str());
    std::size_t count = 0;
    for (std::string p; pts >> p;) ++count;
    CHECK(count == 30);  // 15 upper + 15 lower vertices
}

TEST_CASE("report edge cases") {
    Fixture f;
    std::ostringstream log;
    CHECK_THROWS_WITH(cmd_report(f.config, log), Catch::Matchers::ContainsSubstring("test_predictions.csv"));

    f.config.proxy = "Follower";
    cmd_forecast(f.config, log);
    csv::write_atomic(f.config.out_dir / "test_predictions.csv", "date,actual,predicted\n");
    std::filesystem::remove(f.config.out_dir / "chart.svg");
    CHECK_FALSE(cmd_report(f.config, log));
    CHECK_FALSE(std::filesystem::exists(f.config.out_dir / "chart.svg"));
    CHECK(log.str().find("warning") != std::string::npos);
}

TEST_CASE("forecast needs a proxy") {
    Fixture f;
    std::ostringstream log;
    CHECK_THROWS_AS(cmd_forecast(f.config, log), ConfigError);
    f.config.proxy = "Nope";
    CHECK_THROWS_WITH(cmd_forecast(f.config, log), Catch::Matchers::ContainsSubstring("Nope"));
}

TEST_CASE("prepared data is imputed and in original units") {
    Fixture f;
    std::ostringstream log;
    const auto data = prepare_data(f.config, log);
    REQUIRE(data.candidates.size() == 4);
    for (const auto& s : data.candidates) CHECK(s.fully_observed());
    CHECK(data.imputation.imputed_cells > 0);
    CHECK(data.target.size() == 6);
}

TEST_CASE("candidates must cover the target years") {
    Fixture f;
    csv::write_atomic(f.dir / "target.csv", "year,value\n2014,1\n2015,2\n2016,3\n");
    std::ostringstream log;
    CHECK_THROWS_WITH(cmd_rank(f.config, log), Catch::Matchers::ContainsSubstring("Follower"));
}

TEST_CASE("column names follow the level") {
    CHECK(forecast_columns("X", 0.9)[2] == "Adjusted_CI_Lower_90%");
    CHECK(forecast_columns("X", 0.975)[3] == "Adjusted_CI_Upper_97.5%");
}
