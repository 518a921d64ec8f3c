#include "proxycast/svg_chart.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>

namespace proxycast {

namespace {

constexpr double kWidth = 960.0;
constexpr double kPanelHeight = 300.0;
constexpr double kMarginLeft = 80.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 30.0;

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

struct Panel {
    double top = 0.0;
    double lo = 0.0;
    double hi = 1.0;
    std::size_t count = 1;

    [[nodiscard]] double x(std::size_t i) const {
        const double inner = kWidth - kMarginLeft - kMarginRight;
        return kMarginLeft + (count <= 1 ? inner / 2 : inner * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    [[nodiscard]] double y(double v) const {
        const double inner = kPanelHeight - kMarginTop - kMarginBottom;
        return top + kMarginTop + inner * (1.0 - (v - lo) / (hi - lo));
    }
};

Panel make_panel(double top, std::size_t count, std::initializer_list<const std::vector<double>*> series) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto* s : series) {
        for (double v : *s) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!(lo < hi)) {
        lo -= 1.0;
        hi += 1.0;
    }
    const double pad = 0.05 * (hi - lo);
    return {top, lo - pad, hi + pad, count};
}

void polyline(std::ostream& out, const Panel& p, const std::vector<double>& v, const char* colour, const char* cls) {
    out << "<polyline class=\"" << cls << "\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << num(p.x(i)) << ',' << num(p.y(v[i]));
    out << "\"/>\n";
}

void axes(std::ostream& out, const Panel& p, const std::string& title) {
    const double bottom = p.top + kPanelHeight - kMarginBottom;
    out << "<text x=\"" << num(kMarginLeft) << "\" y=\"" << num(p.top + 24) << "\" font-size=\"15\">" << escape(title)
        << "</text>\n";
    out << "<line x1=\"" << num(kMarginLeft) << "\" y1=\"" << num(p.top + kMarginTop) << "\" x2=\"" << num(kMarginLeft)
        << "\" y2=\"" << num(bottom) << "\" stroke=\"#333\"/>\n";
    out << "<line x1=\"" << num(kMarginLeft) << "\" y1=\"" << num(bottom) << "\" x2=\"" << num(kWidth - kMarginRight)
        << "\" y2=\"" << num(bottom) << "\" stroke=\"#333\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double v = p.lo + (p.hi - p.lo) * t / 4.0;
        out << "<text x=\"" << num(kMarginLeft - 6) << "\" y=\"" << num(p.y(v) + 4)
            << "\" font-size=\"11\" text-anchor=\"end\">" << num(v) << "</text>\n";
    }
}

}  // namespace

std::string render_forecast_svg(const ChartData& d) {
    const bool has_test = !d.actual.empty();
    const double height = kPanelHeight * (has_test ? 2.0 : 1.0) + 20.0;
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\"" << num(height)
        << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(height) << "\" font-family=\"sans-serif\">\n";
    out << "<title>" << escape(d.title) << "</title>\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    double top = 0.0;
    if (has_test) {
        const Panel p = make_panel(top, d.actual.size(), {&d.actual, &d.predicted});
        axes(out, p, "Actual vs predicted " + d.proxy + " (test window)");
        polyline(out, p, d.actual, "#1f77b4", "actual");
        polyline(out, p, d.predicted, "#ff7f0e", "predicted");
        top += kPanelHeight;
    }

    const Panel p = make_panel(top, d.point.size(), {&d.point, &d.lower, &d.upper});
    char heading[160];
    std::snprintf(heading, sizeof heading, "Next %zu steps, %g%% intervals (inflation %g)", d.point.size(),
                  d.level * 100.0, d.inflation);
    axes(out, p, heading);
    out << "<polygon class=\"fan\" fill=\"#ff7f0e\" fill-opacity=\"0.25\" stroke=\"none\" points=\"";
    for (std::size_t i = 0; i < d.upper.size(); ++i) out << (i ? " " : "") << num(p.x(i)) << ',' << num(p.y(d.upper[i]));
    for (std::size_t i = d.lower.size(); i-- > 0;) out << ' ' << num(p.x(i)) << ',' << num(p.y(d.lower[i]));
    out << "\"/>\n";
    polyline(out, p, d.point, "#d62728", "forecast");
    out << "</svg>\n";
    return out.str();
}

}  // namespace proxycast
