#pragma once

#include <string>
#include <vector>

namespace ail {

// Minimal SVG line-chart writer: fixed 800x500 canvas, linear axes, one
// polyline per series. No plotting dependency; output is stable for goldens.
struct SvgSeries {
    std::string label;
    std::vector<double> ys;  // x is the 1-based index
};

std::string svg_line_chart(const std::string& title,
                           const std::vector<SvgSeries>& series);

}  // namespace ail
