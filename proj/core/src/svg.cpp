#include "ail/svg.hpp"

#include <algorithm>
#include <sstream>

namespace ail {

namespace {

const char* kColors[] = {"#1f6fb2", "#d1495b", "#3a7d44", "#8d5a97", "#c77d1e"};

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(6);
    out << v;
    return out.str();
}

}  // namespace

std::string svg_line_chart(const std::string& title,
                           const std::vector<SvgSeries>& series) {
    const double width = 800, height = 500;
    const double ml = 70, mr = 20, mt = 40, mb = 50;
    const double pw = width - ml - mr, ph = height - mt - mb;

    std::size_t n = 0;
    double ymax = 1.0;
    for (const auto& s : series) {
        n = std::max(n, s.ys.size());
        for (double y : s.ys) ymax = std::max(ymax, y);
    }
    double xmax = std::max<std::size_t>(n, 1);

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" "
           "viewBox=\"0 0 800 500\">\n";
    out << "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
    // axes
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << mt + ph << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
        << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        double fy = mt + ph - ph * tick / 4.0;
        double val = ymax * tick / 4.0;
        out << "<text x=\"" << ml - 8 << "\" y=\"" << fy + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << fmt(val) << "</text>\n";
        double fx = ml + pw * tick / 4.0;
        out << "<text x=\"" << fx << "\" y=\"" << mt + ph + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << fmt(xmax * tick / 4.0) << "</text>\n";
    }
    int ci = 0;
    for (const auto& s : series) {
        const char* color = kColors[ci % 5];
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.ys.size(); ++i) {
            double px = ml + pw * static_cast<double>(i + 1) / xmax;
            double py = mt + ph - ph * (ymax > 0 ? s.ys[i] / ymax : 0.0);
            out << fmt(px) << ',' << fmt(py) << ' ';
        }
        out << "\"/>\n";
        out << "<text x=\"" << ml + 10 << "\" y=\"" << mt + 16 + 16 * ci
            << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color
            << "\">" << s.label << "</text>\n";
        ++ci;
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace ail
