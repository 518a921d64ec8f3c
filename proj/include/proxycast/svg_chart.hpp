#pragma once

#include <string>
#include <vector>

namespace proxycast {

struct ChartData {
    std::string title;
    std::string proxy;
    std::vector<std::string> test_labels;
    std::vector<double> actual;
    std::vector<double> predicted;
    std::vector<double> point;
    std::vector<double> lower;
    std::vector<double> upper;
    double level = 0.95;
    double inflation = 1.0;
};

/// Two stacked panels: actual vs predicted over the test window, and the
/// forecast with its interval fan. Static SVG, no scripts.
std::string render_forecast_svg(const ChartData& data);

}  // namespace proxycast
