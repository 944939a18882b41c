#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

namespace mmsir::cli {

namespace {

constexpr double kW = 720, kH = 480;
constexpr double kLeft = 70, kRight = 200, kTop = 40, kBottom = 60;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// 1, 2 or 5 times a power of ten, giving about `target` ticks.
double nice_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (m * mag >= raw) return m * mag;
    }
    return 10.0 * mag;
}

}  // namespace

std::string cdf_plot_svg(const PlotSpec& spec, const std::vector<Series>& series) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
    for (const auto& s : series) {
        for (double v : s.x) {
            if (std::isfinite(v)) {
                x0 = std::min(x0, v);
                x1 = std::max(x1, v);
            }
        }
    }
    if (!(x1 > x0)) {
        x0 = 0.0;
        x1 = 1.0;
    }
    const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
    const auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
    const auto py = [&](double y) { return kTop + (1.0 - std::clamp(y, 0.0, 1.0)) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
       << escape(spec.title) << "</text>\n";

    const double xs = nice_step(x1 - x0, 8);
    for (double t = std::ceil(x0 / xs) * xs; t <= x1 + 1e-9; t += xs) {
        os << "<line x1=\"" << num(px(t)) << "\" y1=\"" << kTop << "\" x2=\"" << num(px(t)) << "\" y2=\""
           << kTop + ph << "\" stroke=\"#e5e5e5\"/>\n";
        os << "<text x=\"" << num(px(t)) << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">"
           << (std::abs(t) < 1e-12 ? 0.0 : t) << "</text>\n";
    }
    for (int i = 0; i <= 10; ++i) {
        const double t = i / 10.0;
        os << "<line x1=\"" << kLeft << "\" y1=\"" << num(py(t)) << "\" x2=\"" << kLeft + pw << "\" y2=\""
           << num(py(t)) << "\" stroke=\"#e5e5e5\"/>\n";
        os << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(py(t) + 4) << "\" text-anchor=\"end\">" << t
           << "</text>\n";
    }
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 20 << "\" text-anchor=\"middle\">"
       << escape(spec.x_label) << "</text>\n";
    os << "<text x=\"18\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
       << kTop + ph / 2 << ")\">" << escape(spec.y_label) << "</text>\n";
    for (double m : spec.x_markers) {
        if (m < x0 || m > x1) continue;
        os << "<line x1=\"" << num(px(m)) << "\" y1=\"" << kTop << "\" x2=\"" << num(px(m)) << "\" y2=\""
           << kTop + ph << "\" stroke=\"black\" stroke-dasharray=\"2,3\"/>\n";
    }

    for (std::size_t i = 0; i < series.size(); ++i) {
        const Series& s = series[i];
        const char* color = kPalette[i % std::size(kPalette)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
        if (s.dashed) os << " stroke-dasharray=\"6,4\"";
        os << " points=\"";
        for (std::size_t j = 0; j < s.x.size() && j < s.y.size(); ++j) {
            if (!std::isfinite(s.x[j]) || !std::isfinite(s.y[j])) continue;
            os << num(px(s.x[j])) << "," << num(py(s.y[j])) << " ";
        }
        os << "\"/>\n";
        const double ly = kTop + 10 + 18.0 * static_cast<double>(i);
        os << "<line x1=\"" << kW - kRight + 12 << "\" y1=\"" << ly << "\" x2=\"" << kW - kRight + 40
           << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"1.5\""
           << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
        os << "<text x=\"" << kW - kRight + 46 << "\" y=\"" << ly + 4 << "\">" << escape(s.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string reuse_map_svg(const std::string& title, const Layout& layout, const std::vector<int>& group) {
    const double size = 640;
    double extent = 0.0;
    for (const Point& p : layout.bs) extent = std::max({extent, std::abs(p.x), std::abs(p.y)});
    extent += layout.spacing;
    const double scale = (size / 2 - 20) / extent;
    const double r = layout.spacing / std::sqrt(3.0) * scale;  // hexagon circumradius

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size + 30
       << "\" font-family=\"sans-serif\" font-size=\"14\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << size / 2 << "\" y=\"20\" text-anchor=\"middle\">" << escape(title) << "</text>\n";
    for (std::size_t j = 0; j < layout.size(); ++j) {
        const double cx = size / 2 + layout.bs[j].x * scale;
        const double cy = size / 2 + 30 - layout.bs[j].y * scale;
        const char* fill = j == 0 ? "#d62728" : (group[j] == group[0] ? "#9ecae1" : "white");
        os << "<polygon fill=\"" << fill << "\" stroke=\"#555\" stroke-width=\"0.5\" points=\"";
        // pointy-top hexagons for the x-aligned lattice
        for (int v = 0; v < 6; ++v) {
            const double a = std::numbers::pi / 6.0 + v * std::numbers::pi / 3.0;
            os << num(cx + r * std::cos(a)) << "," << num(cy + r * std::sin(a)) << " ";
        }
        os << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace mmsir::cli
