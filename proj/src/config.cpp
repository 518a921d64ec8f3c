#include "proxycast/config.hpp"

#include "proxycast/csv.hpp"
#include "proxycast/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

namespace proxycast {

namespace {

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    for (const auto& item : csv::split_line(text)) {
        auto t = csv::trim(item);
        if (!t.empty()) out.push_back(std::move(t));
    }
    return out;
}

double parse_real(const std::string& key, std::string_view text) {
    double v = 0.0;
    const auto t = csv::trim(text);
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(v)) {
        throw ConfigError(key + ": expected a number, got '" + std::string(text) + "'");
    }
    return v;
}

std::uint64_t parse_unsigned(const std::string& key, std::string_view text) {
    std::uint64_t v = 0;
    const auto t = csv::trim(text);
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
        throw ConfigError(key + ": expected a non-negative integer, got '" + std::string(text) + "'");
    }
    return v;
}

bool parse_bool(const std::string& key, std::string_view text) {
    std::string t = csv::trim(text);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigError(key + ": expected true/false, got '" + std::string(text) + "'");
}

std::vector<double> parse_real_list(const std::string& key, std::string_view text) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) out.push_back(parse_real(key, item));
    if (out.empty()) throw ConfigError(key + ": list is empty");
    return out;
}

Date parse_date(const std::string& key, std::string_view text) {
    try {
        return parse_iso_date(csv::trim(text));
    } catch (const DataError& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

struct GridAxes {
    std::vector<std::size_t> rounds{100, 300};
    std::vector<std::size_t> max_depth{3, 5};
    std::vector<double> learning_rate{0.05, 0.1};
    std::vector<double> lambda{1.0};
    std::vector<double> alpha{0.0};
    std::vector<double> gamma{0.0};
    std::vector<double> min_child_weight{1.0};

    [[nodiscard]] std::vector<gbt::HyperParams> expand() const {
        std::vector<gbt::HyperParams> grid;
        for (auto r : rounds)
            for (auto d : max_depth)
                for (auto eta : learning_rate)
                    for (auto l2 : lambda)
                        for (auto l1 : alpha)
                            for (auto g : gamma)
                                for (auto mcw : min_child_weight) grid.push_back({r, d, eta, l2, l1, g, mcw});
        return grid;
    }
};

struct Builder {
    RunConfig config;
    GridAxes grid;
    std::vector<std::string> wide;
    std::vector<std::string> ohlcv;
    std::string cache_dir = "cache";
    std::string data_dir;
    std::optional<std::uint64_t> impute_seed;
};

using Setter = std::function<void(Builder&, const std::string& key, const std::string& value)>;

const std::vector<std::pair<std::string, Setter>>& registry() {
    static const std::vector<std::pair<std::string, Setter>> table = {
        {"data.dir", [](Builder& b, const auto&, const auto& v) { b.data_dir = csv::trim(v); }},
        {"data.target", [](Builder& b, const auto&, const auto& v) { b.config.target = csv::trim(v); }},
        {"data.wide", [](Builder& b, const auto&, const auto& v) { b.wide = split_list(v); }},
        {"data.ohlcv", [](Builder& b, const auto&, const auto& v) { b.ohlcv = split_list(v); }},
        {"remote.instruments",
         [](Builder& b, const auto&, const auto& v) { b.config.remote_instruments = split_list(v); }},
        {"remote.url", [](Builder& b, const auto&, const auto& v) { b.config.endpoint.url_template = csv::trim(v); }},
        {"remote.cache_dir", [](Builder& b, const auto&, const auto& v) { b.cache_dir = csv::trim(v); }},
        {"remote.ttl_hours",
         [](Builder& b, const auto& k, const auto& v) {
             const double hours = parse_real(k, v);
             if (hours < 0) throw ConfigError(k + ": must be >= 0");
             b.config.endpoint.ttl = std::chrono::seconds(static_cast<long long>(hours * 3600.0));
         }},
        {"remote.timeout_seconds",
         [](Builder& b, const auto& k, const auto& v) {
             b.config.endpoint.timeout = std::chrono::seconds(parse_unsigned(k, v));
         }},
        {"remote.start", [](Builder& b, const auto& k, const auto& v) { b.config.remote_range.start = parse_date(k, v); }},
        {"remote.end", [](Builder& b, const auto& k, const auto& v) { b.config.remote_range.end = parse_date(k, v); }},
        {"remote.offline", [](Builder& b, const auto& k, const auto& v) { b.config.endpoint.offline = parse_bool(k, v); }},
        {"impute.hidden_width",
         [](Builder& b, const auto& k, const auto& v) {
             const auto w = parse_unsigned(k, v);
             if (w == 0) {
                 b.config.impute.hidden_width.reset();
             } else {
                 b.config.impute.hidden_width = w;
             }
         }},
        {"impute.learning_rate",
         [](Builder& b, const auto& k, const auto& v) { b.config.impute.learning_rate = parse_real(k, v); }},
        {"impute.epochs", [](Builder& b, const auto& k, const auto& v) { b.config.impute.epochs = parse_unsigned(k, v); }},
        {"impute.seed", [](Builder& b, const auto& k, const auto& v) { b.impute_seed = parse_unsigned(k, v); }},
        {"similarity.epsilon",
         [](Builder& b, const auto& k, const auto& v) { b.config.similarity.epsilon = parse_real(k, v); }},
        {"similarity.gamma", [](Builder& b, const auto& k, const auto& v) { b.config.similarity.gamma = parse_real(k, v); }},
        {"similarity.band",
         [](Builder& b, const auto& k, const auto& v) {
             const auto t = csv::trim(v);
             if (t.empty() || t == "none") {
                 b.config.similarity.band.reset();
             } else {
                 b.config.similarity.band = parse_unsigned(k, t);
             }
         }},
        {"selection.methods",
         [](Builder& b, const auto&, const auto& v) {
             b.config.methods.clear();
             for (const auto& m : split_list(v)) b.config.methods.push_back(similarity::parse_method(m));
         }},
        {"selection.k", [](Builder& b, const auto& k, const auto& v) { b.config.top_k = parse_unsigned(k, v); }},
        {"selection.normalize",
         [](Builder& b, const auto& k, const auto& v) { b.config.normalize_annual = parse_bool(k, v); }},
        {"features.lags",
         [](Builder& b, const auto& k, const auto& v) {
             try {
                 b.config.features.lags = parse_size_list(v);
             } catch (const ConfigError& e) {
                 throw ConfigError(k + ": " + e.what());
             }
         }},
        {"features.windows",
         [](Builder& b, const auto& k, const auto& v) {
             try {
                 b.config.features.rolling_windows = csv::trim(v).empty() ? std::vector<std::size_t>{} : parse_size_list(v);
             } catch (const ConfigError& e) {
                 throw ConfigError(k + ": " + e.what());
             }
         }},
        {"features.day_of_week",
         [](Builder& b, const auto& k, const auto& v) { b.config.features.day_of_week = parse_bool(k, v); }},
        {"training.proxy", [](Builder& b, const auto&, const auto& v) { b.config.proxy = csv::trim(v); }},
        {"training.train_fraction",
         [](Builder& b, const auto& k, const auto& v) { b.config.train_fraction = parse_real(k, v); }},
        {"training.folds", [](Builder& b, const auto& k, const auto& v) { b.config.folds = parse_unsigned(k, v); }},
        {"grid.rounds",
         [](Builder& b, const auto& k, const auto& v) {
             b.grid.rounds.clear();
             for (double x : parse_real_list(k, v)) b.grid.rounds.push_back(static_cast<std::size_t>(x));
         }},
        {"grid.max_depth",
         [](Builder& b, const auto& k, const auto& v) {
             b.grid.max_depth.clear();
             for (double x : parse_real_list(k, v)) b.grid.max_depth.push_back(static_cast<std::size_t>(x));
         }},
        {"grid.learning_rate", [](Builder& b, const auto& k, const auto& v) { b.grid.learning_rate = parse_real_list(k, v); }},
        {"grid.lambda", [](Builder& b, const auto& k, const auto& v) { b.grid.lambda = parse_real_list(k, v); }},
        {"grid.alpha", [](Builder& b, const auto& k, const auto& v) { b.grid.alpha = parse_real_list(k, v); }},
        {"grid.gamma", [](Builder& b, const auto& k, const auto& v) { b.grid.gamma = parse_real_list(k, v); }},
        {"grid.min_child_weight",
         [](Builder& b, const auto& k, const auto& v) { b.grid.min_child_weight = parse_real_list(k, v); }},
        {"intervals.horizon", [](Builder& b, const auto& k, const auto& v) { b.config.horizon = parse_unsigned(k, v); }},
        {"intervals.level", [](Builder& b, const auto& k, const auto& v) { b.config.level = parse_real(k, v); }},
        {"intervals.inflation", [](Builder& b, const auto& k, const auto& v) { b.config.inflation = parse_real(k, v); }},
        {"run.seed", [](Builder& b, const auto& k, const auto& v) { b.config.seed = parse_unsigned(k, v); }},
        {"run.out", [](Builder& b, const auto&, const auto& v) { b.config.out_dir = csv::trim(v); }},
    };
    return table;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::filesystem::path& p) {
    return p.is_absolute() ? p : base / p;
}

}  // namespace

std::vector<std::size_t> parse_size_list(std::string_view text) {
    std::vector<std::size_t> out;
    for (const auto& item : split_list(text)) {
        const auto dash = item.find('-', 1);
        auto parse_one = [&](std::string_view s) {
            std::size_t v = 0;
            const auto t = csv::trim(s);
            auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
            if (ec != std::errc{} || ptr != t.data() + t.size() || v == 0) {
                throw ConfigError("expected a positive integer, got '" + std::string(s) + "'");
            }
            return v;
        };
        if (dash == std::string::npos) {
            out.push_back(parse_one(item));
        } else {
            const auto lo = parse_one(std::string_view(item).substr(0, dash));
            const auto hi = parse_one(std::string_view(item).substr(dash + 1));
            if (hi < lo) throw ConfigError("empty range '" + item + "'");
            for (auto v = lo; v <= hi; ++v) out.push_back(v);
        }
    }
    return out;
}

ConfigMap parse_ini(std::string_view text) {
    ConfigMap values;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = csv::trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError("config line " + std::to_string(line_no) + ": unterminated section");
            section = csv::trim(std::string_view(t).substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const auto key = csv::trim(std::string_view(t).substr(0, eq));
        if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        values[section.empty() ? key : section + "." + key] = csv::trim(std::string_view(t).substr(eq + 1));
    }
    return values;
}

ConfigMap load_ini(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_ini(buf.str());
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [name, setter] : registry()) k.push_back(name);
        return k;
    }();
    return keys;
}

RunConfig default_run_config() { return build_run_config({}, PROXYCAST_FIXTURE_DIR); }

RunConfig build_run_config(const ConfigMap& values, const std::filesystem::path& default_data_dir) {
    Builder b;
    b.wide = {"candidates_wide.csv"};
    b.ohlcv = {"WTI=ohlcv_WTI.csv"};
    b.config.remote_instruments = {"Brent"};
    for (const auto& [key, value] : values) {
        const auto& table = registry();
        const auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == key; });
        if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
        it->second(b, key, value);
    }

    auto& c = b.config;
    c.data_dir = b.data_dir.empty() ? default_data_dir : std::filesystem::path(b.data_dir);
    c.target = resolve(c.data_dir, c.target);
    c.wide_files.clear();
    for (const auto& w : b.wide) c.wide_files.push_back(resolve(c.data_dir, w));
    c.ohlcv_files.clear();
    for (const auto& item : b.ohlcv) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
            throw ConfigError("data.ohlcv: expected 'Instrument=path', got '" + item + "'");
        }
        c.ohlcv_files.push_back({item.substr(0, eq), resolve(c.data_dir, item.substr(eq + 1))});
    }
    c.endpoint.cache_dir = resolve(c.data_dir, b.cache_dir);
    c.impute.seed = b.impute_seed.value_or(c.seed);
    c.grid = b.grid.expand();
    validate(c);
    return c;
}

void validate(const RunConfig& c) {
    validate(c.impute);
    similarity::validate(c.similarity);
    validate(c.features);
    if (c.methods.empty()) throw ConfigError("selection.methods: at least one method is required");
    if (c.top_k < 1) throw ConfigError("selection.k must be >= 1");
    if (!(c.train_fraction > 0.0 && c.train_fraction < 1.0)) throw ConfigError("training.train_fraction must lie in (0, 1)");
    if (c.folds < 2) throw ConfigError("training.folds must be >= 2");
    if (c.grid.empty()) throw ConfigError("grid is empty");
    for (const auto& hp : c.grid) gbt::validate(hp);
    if (c.horizon < 1) throw ConfigError("intervals.horizon must be >= 1");
    if (!(c.level > 0.0 && c.level < 1.0)) throw ConfigError("intervals.level must lie in (0, 1)");
    if (!(c.inflation >= 1.0)) throw ConfigError("intervals.inflation must be >= 1");
    if (c.wide_files.empty() && c.ohlcv_files.empty() && c.remote_instruments.empty()) {
        throw ConfigError("no candidate sources configured");
    }
    if (c.out_dir.empty()) throw ConfigError("run.out must not be empty");
    if (c.endpoint.url_template.find("://") == std::string::npos) {
        throw ConfigError("remote.url must be an absolute http(s) URL");
    }
}

ConfigMap environment_overrides() {
    ConfigMap out;
    const std::pair<const char*, const char*> vars[] = {
        {"PROXYCAST_ENDPOINT", "remote.url"},
        {"PROXYCAST_CACHE_DIR", "remote.cache_dir"},
        {"PROXYCAST_CACHE_TTL_HOURS", "remote.ttl_hours"},
        {"PROXYCAST_OFFLINE", "remote.offline"},
    };
    for (const auto& [env, key] : vars) {
        if (const char* v = std::getenv(env)) out[key] = v;
    }
    return out;
}

}  // namespace proxycast
