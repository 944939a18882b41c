#pragma once

// Static SVG plots: CDF line charts and hex reuse maps.

#include <string>
#include <vector>

#include "mmsir/geometry.hpp"

namespace mmsir::cli {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label = "CDF";
    std::vector<double> x_markers;  ///< vertical dotted lines
};

std::string cdf_plot_svg(const PlotSpec& spec, const std::vector<Series>& series);

/// Cells as hexagons, shaded when they share BS 0's pilot group.
std::string reuse_map_svg(const std::string& title, const Layout& layout, const std::vector<int>& group);

}  // namespace mmsir::cli
