#include "poa/charts.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace poa {

namespace {

const char* kPalette[] = {"#b2bec3", "#a29bfe", "#ff7675", "#74b9ff",
                          "#55efc4", "#fdcb6e", "#e17055", "#636e72"};
constexpr int kPaletteSize = 8;

std::string escape_xml(const std::string& s) {
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

}  // namespace

std::string grouped_bar_chart_svg(const std::string& title, const std::vector<std::string>& groups,
                                  const std::vector<std::string>& series,
                                  const std::vector<std::vector<double>>& values) {
    const double bar_w = 14.0, gap = 10.0, left = 50.0, top = 40.0, plot_h = 220.0;
    const double group_w = bar_w * static_cast<double>(series.size()) + gap;
    const double width = left + group_w * static_cast<double>(groups.size()) + 40.0;
    const double height = top + plot_h + 80.0;

    double vmax = 1.0;
    for (const auto& row : values)
        for (double v : row) vmax = std::max(vmax, v);

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" font-family=\"sans-serif\">\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
        << escape_xml(title) << "</text>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << width - 20
        << "\" y2=\"" << top + plot_h << "\" stroke=\"#333\"/>\n";
    for (size_t gi = 0; gi < groups.size(); ++gi) {
        double gx = left + group_w * static_cast<double>(gi);
        for (size_t si = 0; si < series.size(); ++si) {
            double v = si < values.size() && gi < values[si].size() ? values[si][gi] : 0.0;
            double h = plot_h * v / vmax;
            svg << "<rect x=\"" << gx + bar_w * static_cast<double>(si) << "\" y=\""
                << top + plot_h - h << "\" width=\"" << bar_w - 2 << "\" height=\"" << h
                << "\" fill=\"" << kPalette[si % kPaletteSize] << "\"/>\n";
        }
        svg << "<text x=\"" << gx + group_w / 2 - gap / 2 << "\" y=\"" << top + plot_h + 16
            << "\" text-anchor=\"middle\" font-size=\"9\" transform=\"rotate(20 "
            << gx + group_w / 2 - gap / 2 << " " << top + plot_h + 16 << ")\">"
            << escape_xml(groups[gi]) << "</text>\n";
    }
    for (size_t si = 0; si < series.size(); ++si) {
        double lx = left + static_cast<double>(si) * 110.0;
        double ly = height - 20.0;
        svg << "<rect x=\"" << lx << "\" y=\"" << ly - 10 << "\" width=\"10\" height=\"10\" fill=\""
            << kPalette[si % kPaletteSize] << "\"/>\n";
        svg << "<text x=\"" << lx + 14 << "\" y=\"" << ly << "\" font-size=\"11\">"
            << escape_xml(series[si]) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string stacked_bar_chart_svg(const std::string& title, const std::vector<std::string>& rows,
                                  const std::vector<std::string>& series,
                                  const std::vector<std::vector<double>>& values) {
    const double left = 110.0, top = 40.0, row_h = 22.0, plot_w = 420.0;
    const double height = top + row_h * static_cast<double>(rows.size()) + 60.0;
    const double width = left + plot_w + 40.0;

    double vmax = 1.0;
    for (size_t ri = 0; ri < rows.size(); ++ri) {
        double total = 0.0;
        for (size_t si = 0; si < series.size(); ++si)
            if (si < values.size() && ri < values[si].size()) total += values[si][ri];
        vmax = std::max(vmax, total);
    }

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" font-family=\"sans-serif\">\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
        << escape_xml(title) << "</text>\n";
    for (size_t ri = 0; ri < rows.size(); ++ri) {
        double y = top + row_h * static_cast<double>(ri);
        svg << "<text x=\"" << left - 8 << "\" y=\"" << y + row_h - 8
            << "\" text-anchor=\"end\" font-size=\"10\">" << escape_xml(rows[ri]) << "</text>\n";
        double x = left;
        for (size_t si = 0; si < series.size(); ++si) {
            double v = si < values.size() && ri < values[si].size() ? values[si][ri] : 0.0;
            double w = plot_w * v / vmax;
            svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w << "\" height=\""
                << row_h - 4 << "\" fill=\"" << kPalette[si % kPaletteSize] << "\"/>\n";
            x += w;
        }
    }
    for (size_t si = 0; si < series.size(); ++si) {
        double lx = left + static_cast<double>(si) * 110.0;
        double ly = height - 16.0;
        svg << "<rect x=\"" << lx << "\" y=\"" << ly - 10 << "\" width=\"10\" height=\"10\" fill=\""
            << kPalette[si % kPaletteSize] << "\"/>\n";
        svg << "<text x=\"" << lx + 14 << "\" y=\"" << ly << "\" font-size=\"11\">"
            << escape_xml(series[si]) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string word_cloud_svg(const std::string& title,
                           const std::vector<std::pair<std::string, long>>& terms,
                           size_t max_terms) {
    const double width = 560.0;
    std::ostringstream svg;
    std::ostringstream body;
    double y = 60.0;
    double x = 20.0;
    long vmax = 1;
    for (size_t i = 0; i < terms.size() && i < max_terms; ++i) vmax = std::max(vmax, terms[i].second);
    for (size_t i = 0; i < terms.size() && i < max_terms; ++i) {
        double size = 10.0 + 22.0 * static_cast<double>(terms[i].second) / static_cast<double>(vmax);
        double est_w = size * 0.62 * static_cast<double>(terms[i].first.size()) + 12.0;
        if (x + est_w > width - 20.0) {
            x = 20.0;
            y += 36.0;
        }
        body << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"" << size << "\" fill=\""
             << kPalette[i % kPaletteSize] << "\">" << escape_xml(terms[i].first) << "</text>\n";
        x += est_w;
    }
    double height = y + 40.0;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" font-family=\"sans-serif\">\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
        << escape_xml(title) << "</text>\n";
    svg << body.str();
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace poa
