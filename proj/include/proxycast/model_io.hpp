#pragma once

#include "proxycast/gbt.hpp"

#include <filesystem>
#include <string>

namespace proxycast::gbt {

inline constexpr const char* kModelFormat = "proxycast.boosted-ensemble/1";

/// Self-describing JSON: base score, learning rate, feature spec,
/// normalization, and one set of flattened node arrays per tree.
std::string to_json(const BoostedEnsemble& model);
BoostedEnsemble from_json(const std::string& text);

void save_model(const BoostedEnsemble& model, const std::filesystem::path& path);
BoostedEnsemble load_model(const std::filesystem::path& path);

}  // namespace proxycast::gbt
