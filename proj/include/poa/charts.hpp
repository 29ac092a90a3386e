#pragma once

#include <string>
#include <vector>

namespace poa {

// Grouped vertical bar chart (one bar per series within each group) as a
// standalone SVG document.
std::string grouped_bar_chart_svg(const std::string& title, const std::vector<std::string>& groups,
                                  const std::vector<std::string>& series,
                                  const std::vector<std::vector<double>>& values);

// Stacked horizontal bar chart: one row per group, segments per series.
std::string stacked_bar_chart_svg(const std::string& title, const std::vector<std::string>& rows,
                                  const std::vector<std::string>& series,
                                  const std::vector<std::vector<double>>& values);

// Word-cloud-style rendering: terms laid out in rows, font size scaled by
// count relative to the maximum.
std::string word_cloud_svg(const std::string& title,
                           const std::vector<std::pair<std::string, long>>& terms,
                           size_t max_terms = 40);

}  // namespace poa
