#include "cli_app.hpp"

#include "proxycast/config.hpp"
#include "proxycast/error.hpp"
#include "proxycast/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>

#include "CLI11.hpp"

namespace proxycast::cli {

namespace fs = std::filesystem;

namespace {

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::config: return 1;
        case ErrorKind::data: return 2;
        case ErrorKind::numeric: return 3;
    }
    return 1;
}

// one line per diagnostic
std::string one_line(std::string text) {
    std::replace(text.begin(), text.end(), '\n', ' ');
    return text;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Select a market proxy for an annual index and forecast it with boosted trees", "proxycast"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::uint64_t> seed;
    bool offline = false;
    std::string out_dir;
    app.add_option("--config", config_path, "INI config file");
    app.add_option("--seed", seed, "Seed for every stochastic step (run.seed)");
    app.add_flag("--offline", offline, "Use only the response cache (remote.offline)");
    app.add_option("--out", out_dir, "Output directory (run.out)");

    std::map<std::string, std::string> overrides;
    for (const auto& key : config_keys()) {
        app.add_option("--" + key, overrides[key], "Overrides " + key)
            ->group("Settings")
            ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    }

    auto* rank = app.add_subcommand("rank", "Rank candidates against the target and pick a proxy");
    auto* forecast = app.add_subcommand("forecast", "Train on the proxy and forecast with intervals");
    auto* report = app.add_subcommand("report", "Render chart.svg from forecast outputs");
    auto* run = app.add_subcommand("run", "rank, forecast, and report in one go");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << one_line(e.what()) << '\n';
        return 1;
    }

    try {
        ConfigMap values;
        fs::path default_dir = PROXYCAST_FIXTURE_DIR;
        if (!config_path.empty()) {
            const fs::path file = fs::absolute(config_path);
            values = load_ini(file);
            default_dir = file.parent_path();
            // paths written in the file are relative to the file
            for (const char* key : {"data.dir", "run.out"}) {
                auto it = values.find(key);
                if (it != values.end() && !it->second.empty() && fs::path(it->second).is_relative()) {
                    it->second = (default_dir / it->second).lexically_normal().string();
                }
            }
        }
        for (auto& [k, v] : environment_overrides()) values[k] = v;
        for (const auto& [k, v] : overrides) {
            if (app.count("--" + k) > 0) values[k] = v;
        }
        if (seed) values["run.seed"] = std::to_string(*seed);
        if (offline) values["remote.offline"] = "true";
        if (!out_dir.empty()) values["run.out"] = out_dir;

        auto config = build_run_config(values, default_dir);

        if (rank->parsed()) {
            cmd_rank(config, out);
        } else if (forecast->parsed()) {
            cmd_forecast(config, out);
        } else if (report->parsed()) {
            cmd_report(config, out);
        } else if (run->parsed()) {
            const auto prepared = prepare_data(config, out);
            const auto ranked = cmd_rank(config, out, &prepared);
            if (config.proxy.empty()) config.proxy = ranked.consensus.winner;
            cmd_forecast(config, out, &prepared);
            cmd_report(config, out);
        }
    } catch (const Error& e) {
        err << "error: " << one_line(e.what()) << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << one_line(e.what()) << '\n';
        return 2;
    }
    return 0;
}

}  // namespace proxycast::cli
