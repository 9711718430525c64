#include "painleve/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace painleve {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

std::string render_svg(const Plot& plot) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : plot.series)
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (!(xmax > xmin)) { xmax = xmin + 1; xmin -= 1; }
    if (!(ymax > ymin)) { ymax = ymin + 1; ymin -= 1; }
    const double l = 70, rmarg = 20, tmarg = 40, b = 55;
    const double pw = plot.width - l - rmarg, ph = plot.height - tmarg - b;
    auto X = [&](double x) { return l + (x - xmin) / (xmax - xmin) * pw; };
    auto Y = [&](double y) { return tmarg + (1.0 - (y - ymin) / (ymax - ymin)) * ph; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(plot.width) +
           "\" height=\"" + std::to_string(plot.height) + "\" viewBox=\"0 0 " +
           std::to_string(plot.width) + " " + std::to_string(plot.height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + fmt(plot.width / 2.0) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\" font-family=\"sans-serif\">" + plot.title + "</text>\n";
    // axes
    out += "<line x1=\"" + fmt(l) + "\" y1=\"" + fmt(tmarg) + "\" x2=\"" + fmt(l) + "\" y2=\"" + fmt(tmarg + ph) + "\" stroke=\"black\"/>\n";
    out += "<line x1=\"" + fmt(l) + "\" y1=\"" + fmt(tmarg + ph) + "\" x2=\"" + fmt(l + pw) + "\" y2=\"" + fmt(tmarg + ph) + "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        double fx = xmin + (xmax - xmin) * i / 4.0;
        double fy = ymin + (ymax - ymin) * i / 4.0;
        out += "<text x=\"" + fmt(X(fx)) + "\" y=\"" + fmt(tmarg + ph + 18) + "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" + fmt(fx) + "</text>\n";
        out += "<text x=\"" + fmt(l - 8) + "\" y=\"" + fmt(Y(fy) + 4) + "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" + fmt(fy) + "</text>\n";
        out += "<line x1=\"" + fmt(X(fx)) + "\" y1=\"" + fmt(tmarg + ph) + "\" x2=\"" + fmt(X(fx)) + "\" y2=\"" + fmt(tmarg + ph + 4) + "\" stroke=\"black\"/>\n";
        out += "<line x1=\"" + fmt(l - 4) + "\" y1=\"" + fmt(Y(fy)) + "\" x2=\"" + fmt(l) + "\" y2=\"" + fmt(Y(fy)) + "\" stroke=\"black\"/>\n";
    }
    out += "<text x=\"" + fmt(l + pw / 2) + "\" y=\"" + fmt(plot.height - 12.0) + "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">" + plot.xlabel + "</text>\n";
    out += "<text x=\"16\" y=\"" + fmt(tmarg + ph / 2) + "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\" transform=\"rotate(-90 16 " + fmt(tmarg + ph / 2) + ")\">" + plot.ylabel + "</text>\n";

    double ly = tmarg + 6;
    for (const auto& s : plot.series) {
        if (!s.markers_only) {
            std::string pts;
            for (size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                pts += fmt(X(s.x[i])) + "," + fmt(Y(s.y[i])) + " ";
            }
            out += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\"/>\n";
        }
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            out += "<circle cx=\"" + fmt(X(s.x[i])) + "\" cy=\"" + fmt(Y(s.y[i])) + "\" r=\"2.4\" fill=\"" + s.color + "\"/>\n";
        }
        if (!s.name.empty()) {
            out += "<text x=\"" + fmt(l + pw - 6) + "\" y=\"" + fmt(ly) + "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\" fill=\"" + s.color + "\">" + s.name + "</text>\n";
            ly += 14;
        }
    }
    out += "</svg>\n";
    return out;
}

void write_svg(const Plot& plot, const std::string& path) {
    std::ofstream f(path);
    f << render_svg(plot);
}

}  // namespace painleve
