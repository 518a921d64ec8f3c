#pragma once

#include "proxycast/features.hpp"
#include "proxycast/gbt.hpp"
#include "proxycast/grid_search.hpp"
#include "proxycast/impute.hpp"
#include "proxycast/remote.hpp"
#include "proxycast/similarity.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace proxycast {

/// Flat `section.key -> value` view of an INI-style file.
using ConfigMap = std::map<std::string, std::string>;

/// `[section]` headers, `key = value` lines, `#`/`;` comments.
ConfigMap parse_ini(std::string_view text);
ConfigMap load_ini(const std::filesystem::path& path);

struct OhlcvSource {
    std::string instrument;
    std::filesystem::path path;
};

struct RunConfig {
    // [data]
    std::filesystem::path data_dir;  // base for relative data paths
    std::filesystem::path target = "target.csv";
    std::vector<std::filesystem::path> wide_files;
    std::vector<OhlcvSource> ohlcv_files;

    // [remote]
    std::vector<std::string> remote_instruments;
    remote::DateRange remote_range{parse_iso_date("2011-01-01"), parse_iso_date("2023-12-31")};
    remote::EndpointConfig endpoint;

    AutoencoderConfig impute;
    similarity::SimilarityConfig similarity;

    // [selection]
    std::vector<similarity::Method> methods{similarity::Method::soft_dtw, similarity::Method::dtw,
                                            similarity::Method::lcss, similarity::Method::edr,
                                            similarity::Method::hausdorff};
    std::size_t top_k = 5;
    bool normalize_annual = true;

    FeatureSpec features;

    // [training]
    std::string proxy;  // empty: winner of a prior rank
    double train_fraction = 0.8;
    std::size_t folds = 3;
    std::vector<gbt::HyperParams> grid = gbt::default_grid();

    // [intervals]
    std::size_t horizon = 15;
    double level = 0.95;
    double inflation = 1.25;

    // [run]
    std::uint64_t seed = 42;
    std::filesystem::path out_dir = "proxycast_out";
};

/// Every recognised `section.key`, in documentation order.
const std::vector<std::string>& config_keys();

/// Defaults point at the bundled synthetic fixture.
RunConfig default_run_config();

/// Applies `values` over the defaults and validates the result. Relative
/// data paths resolve against `data.dir`, which itself defaults to
/// `default_data_dir`. Unknown keys and bad values raise ConfigError.
RunConfig build_run_config(const ConfigMap& values, const std::filesystem::path& default_data_dir);

/// Throws ConfigError on the first invalid field.
void validate(const RunConfig& config);

/// Environment overrides: PROXYCAST_ENDPOINT, PROXYCAST_CACHE_DIR,
/// PROXYCAST_CACHE_TTL_HOURS, PROXYCAST_OFFLINE.
ConfigMap environment_overrides();

/// Parses "1-14,21" style lists of positive integers.
std::vector<std::size_t> parse_size_list(std::string_view text);

}  // namespace proxycast
