#pragma once

#include "proxycast/series.hpp"

#include <cstdint>
#include <optional>

namespace proxycast {

struct AutoencoderConfig {
    std::optional<std::size_t> hidden_width;  // nullopt: ceil(columns / 2)
    double learning_rate = 0.01;
    std::size_t epochs = 500;
    std::uint64_t seed = 42;
};

void validate(const AutoencoderConfig& config);

struct ImputationReport {
    std::size_t imputed_cells = 0;
    double final_loss = 0.0;  // masked MSE over observed cells
    std::size_t hidden_width = 0;
};

/// Fills missing cells with the reconstruction of a single-hidden-layer
/// autoencoder (tanh hidden, linear output) trained on observed cells only.
///
/// Expects z-normalized columns; missing inputs start at 0 and are refreshed
/// from the reconstruction after every epoch. Observed cells are returned
/// untouched and the output mask is all-true.
DataMatrix impute_autoencoder(const DataMatrix& matrix, const AutoencoderConfig& config,
                              ImputationReport* report = nullptr);

/// z-normalizes each column on its observed cells, imputes, and maps the
/// result back to the original units.
DataMatrix impute_standardized(const DataMatrix& matrix, const AutoencoderConfig& config,
                               ImputationReport* report = nullptr);

}  // namespace proxycast
