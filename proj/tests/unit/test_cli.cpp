#include "cli_app.hpp"
#include "proxycast/csv.hpp"

#include "catch_amalgamated.hpp"
#include "mini_dataset.hpp"
#include "temp_dir.hpp"

#include <cstdlib>
#include <sstream>

using proxycast::cli::run_cli;
using testing_support::TempDir;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> mini_args(const std::string& command, const TempDir& dir) {
    std::vector<std::string> args{command};
    for (const auto& [k, v] : testing_support::mini_settings(dir.path())) {
        args.push_back("--" + k);
        args.push_back(v);
    }
    return args;
}

bool single_line(const std::string& s) { return !s.empty() && s.find('\n') == s.size() - 1; }

}  // namespace

TEST_CASE("help and usage errors") {
    auto r = cli({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("rank") != std::string::npos);
    r = cli({});
    CHECK(r.code == 1);
    r = cli({"rank", "--no-such-flag"});
    CHECK(r.code == 1);
    CHECK(single_line(r.err));
    r = cli({"rank", "--intervals.inflation", "0.5"});
    CHECK(r.code == 1);
    CHECK(r.err.find("inflation") != std::string::npos);
}

TEST_CASE("missing target names the path") {
    TempDir dir;
    testing_support::write_mini_dataset(dir.path());
    auto args = mini_args("rank", dir);
    args.insert(args.end(), {"--data.target", "absent.csv"});
    const auto r = cli(args);
    CHECK(r.code == 2);
    CHECK(single_line(r.err));
    CHECK(r.err.find("absent.csv") != std::string::npos);
}

TEST_CASE("offline with a cold cache is an explicit error") {
    TempDir dir;
    testing_support::write_mini_dataset(dir.path());
    auto args = mini_args("rank", dir);
    args.insert(args.end(), {"--remote.instruments", "Brent", "--remote.cache_dir", (dir / "cold").string(), "--offline"});
    const auto r = cli(args);
    CHECK(r.code == 2);
    CHECK(r.err.find("offline") != std::string::npos);
}

TEST_CASE("run on a small dataset") {
    TempDir dir;
    testing_support::write_mini_dataset(dir.path());
    const auto r = cli(mini_args("run", dir));
    CHECK(r.code == 0);
    CHECK(r.err.empty());
    CHECK(std::filesystem::exists(dir / "out/chart.svg"));
    CHECK(std::filesystem::exists(dir / "out/forecast.csv"));
    // report alone works from the files on disk
    CHECK(cli(mini_args("report", dir)).code == 0);
}

TEST_CASE("config file, environment, and flags layer in order") {
    TempDir dir;
    testing_support::write_mini_dataset(dir.path());
    proxycast::csv::write_atomic(dir / "run.ini",
                                 "[data]\nwide = wide.csv\nohlcv =\n[remote]\ninstruments = Brent\n"
                                 "cache_dir = cold\n[impute]\nepochs = 20\n[run]\nout = from_file\n");
    // the file's cache is cold; the environment points at the bundled recording
    ::setenv("PROXYCAST_CACHE_DIR", (std::filesystem::path(PROXYCAST_FIXTURE_DIR) / "cache").string().c_str(), 1);
    ::setenv("PROXYCAST_OFFLINE", "true", 1);
    std::vector<std::string> base{"rank", "--config", (dir / "run.ini").string()};

    auto args = base;
    args.insert(args.end(), {"--remote.start", "2015-01-01", "--remote.end", "2020-12-31"});
    auto r = cli(args);
    // the recorded response is keyed on the full default range
    CHECK(r.code == 2);

    r = cli(base);
    // target years 2015-2020 are covered by the recording
    CHECK(r.code == 0);
    CHECK(std::filesystem::exists(dir / "from_file/ranking.csv"));

    args = base;
    args.insert(args.end(), {"--out", (dir / "from_flag").string()});
    CHECK(cli(args).code == 0);
    CHECK(std::filesystem::exists(dir / "from_flag/ranking.csv"));

    args = base;
    args.insert(args.end(), {"--remote.cache_dir", (dir / "cold").string()});
    r = cli(args);
    CHECK(r.code == 2);
    ::unsetenv("PROXYCAST_CACHE_DIR");
    ::unsetenv("PROXYCAST_OFFLINE");
}

TEST_CASE("installed binary reports exit codes") {
    TempDir dir;
    const std::string cmd = std::string(PROXYCAST_EXE) + " rank --data.target " + (dir / "none.csv").string() +
                            " --offline > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == 2);
}
