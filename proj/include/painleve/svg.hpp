#pragma once

#include <string>
#include <vector>

namespace painleve {

// Minimal self-contained SVG line/scatter plots; no external renderer.
struct PlotSeries {
    std::string name;
    std::vector<double> x, y;
    bool markers_only = false;
    std::string color = "#1f6feb";
};

struct Plot {
    std::string title, xlabel, ylabel;
    std::vector<PlotSeries> series;
    int width = 640, height = 420;
};

std::string render_svg(const Plot& plot);
void write_svg(const Plot& plot, const std::string& path);

}  // namespace painleve
