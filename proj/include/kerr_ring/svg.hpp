#pragma once

#include <string>
#include <vector>

namespace kerr_ring {

// Dependency-light SVG plotting: polyline charts and cell heatmaps.
// Publication rendering is out of scope; these are quick-look figures.

struct Series {
    std::string name;
    std::string color = "#1f77b4";
    std::vector<double> x, y;
    bool markers_only = false;  // scatter (branch diagrams) vs polyline
};

struct VLine {
    double x = 0.0;
    std::string color = "#888888";
};

void svg_line_plot(const std::string& path, const std::string& title,
                   const std::string& xlabel, const std::string& ylabel,
                   const std::vector<Series>& series,
                   const std::vector<VLine>& vlines = {}, bool logx = false);

// values are row-major over (x, y): index = ix * ys.size() + jy.
void svg_heatmap(const std::string& path, const std::string& title,
                 const std::string& xlabel, const std::string& ylabel,
                 const std::vector<double>& xs, const std::vector<double>& ys,
                 const std::vector<double>& values, bool logy = false);

} // namespace kerr_ring
