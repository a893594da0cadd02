#pragma once

#include <string>
#include <vector>

namespace sdlab {

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool line = true;
    bool markers = false;
    bool dashed = false;
};

struct SvgPlot {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    bool logx = false;
    bool logy = false;
    std::vector<SvgSeries> series;
    std::vector<std::string> header; // emitted as XML comments
};

/// Standalone SVG 1.1 document: framed axes with ticks, one polyline and/or
/// marker set per series, and a legend. Non-positive values are dropped on log axes.
std::string render_svg(const SvgPlot& plot);

} // namespace sdlab
