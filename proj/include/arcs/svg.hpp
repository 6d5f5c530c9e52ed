// Copyright 2026 The ARCS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ARCS_SVG_HPP
#define ARCS_SVG_HPP

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "arcs/phase_diagram.hpp"

namespace arcs {

// Self-contained static SVG output; no external renderer involved.

struct SvgSeries {
  std::string label;
  std::vector<double> values;  // y per time index
};

namespace svg_detail {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace svg_detail

inline void write_line_chart(const std::filesystem::path& path,
                             const std::string& title,
                             const std::string& y_label,
                             const std::vector<SvgSeries>& series) {
  const int width = 720, height = 420;
  const double left = 60, right = 20, top = 40, bottom = 40;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  std::size_t points = 0;
  double y_min = 0.0, y_max = 1e-9;
  for (const auto& s : series) {
    points = std::max(points, s.values.size());
    for (double v : s.values)
      if (std::isfinite(v)) {
        y_min = std::min(y_min, v);
        y_max = std::max(y_max, v);
      }
  }
  if (points < 1) points = 1;
  y_max += 0.05 * (y_max - y_min + 1e-12);

  auto x_at = [&](std::size_t i) {
    return left + (points == 1 ? plot_w / 2
                               : plot_w * static_cast<double>(i) /
                                     static_cast<double>(points - 1));
  };
  auto y_at = [&](double v) {
    return top + plot_h * (1.0 - (v - y_min) / (y_max - y_min));
  };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("svg: cannot write " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">"
      << title << "</text>\n";
  out << "<text x=\"14\" y=\"" << top + plot_h / 2
      << "\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 14 "
      << top + plot_h / 2 << ")\" text-anchor=\"middle\">" << y_label
      << "</text>\n";
  // Axes and horizontal gridlines with labels.
  out << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\""
      << left + plot_w << "\" y2=\"" << top + plot_h
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
      << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
  for (int g = 0; g <= 4; ++g) {
    const double v = y_min + (y_max - y_min) * g / 4.0;
    const double y = y_at(v);
    out << "<line x1=\"" << left << "\" y1=\"" << svg_detail::num(y)
        << "\" x2=\"" << left + plot_w << "\" y2=\"" << svg_detail::num(y)
        << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << left - 6 << "\" y=\"" << svg_detail::num(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << svg_detail::num(v) << "</text>\n";
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color =
        svg_detail::kPalette[s % (sizeof(svg_detail::kPalette) /
                                  sizeof(svg_detail::kPalette[0]))];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[s].values.size(); ++i) {
      const double v = series[s].values[i];
      if (!std::isfinite(v)) continue;
      out << svg_detail::num(x_at(i)) << "," << svg_detail::num(y_at(v)) << " ";
    }
    out << "\"/>\n";
    out << "<text x=\"" << left + 8 << "\" y=\"" << top + 14 + 16 * s
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color
        << "\">" << series[s].label << "</text>\n";
  }
  out << "</svg>\n";
}

/// Heatmap of the success-probability grid; undersampling along x,
/// sparsity ratio along y (origin at the bottom-left).
inline void write_phase_diagram_svg(const std::filesystem::path& path,
                                    const PhaseDiagram& pd) {
  const int cell = 26, left = 70, top = 40, bottom = 50, right = 90;
  const int cols = static_cast<int>(pd.m_fractions.size());
  const int rows = static_cast<int>(pd.s_fractions.size());
  const int width = left + cols * cell + right;
  const int height = top + rows * cell + bottom;

  auto shade = [](double rate) -> std::string {
    if (std::isnan(rate)) return "#c0c0c0";
    // Dark blue (0) to warm yellow (1).
    const int r = static_cast<int>(40 + 215 * rate);
    const int g = static_cast<int>(40 + 190 * rate);
    const int b = static_cast<int>(120 - 80 * rate + 40);
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, std::min(b, 255));
    return buf;
  };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("svg: cannot write " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"14\">"
      << to_string(pd.kind) << " ensemble, n=" << pd.ambient_dim << ", "
      << pd.trials << " trials/cell</text>\n";
  for (int col = 0; col < cols; ++col)
    for (int row = 0; row < rows; ++row) {
      const double rate = pd.success(row, col);
      const int x = left + col * cell;
      const int y = top + (rows - 1 - row) * cell;
      out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
          << "\" height=\"" << cell << "\" fill=\"" << shade(rate)
          << "\"/>\n";
    }
  out << "<text x=\"" << left + cols * cell / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">measurement fraction M/n</text>\n";
  out << "<text x=\"18\" y=\"" << top + rows * cell / 2
      << "\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 18 "
      << top + rows * cell / 2
      << ")\" text-anchor=\"middle\">sparsity ratio s/M</text>\n";
  // Axis extremes.
  out << "<text x=\"" << left << "\" y=\"" << height - 30
      << "\" font-family=\"sans-serif\" font-size=\"10\">"
      << format_double(pd.m_fractions.front()) << "</text>\n";
  out << "<text x=\"" << left + (cols - 1) * cell << "\" y=\"" << height - 30
      << "\" font-family=\"sans-serif\" font-size=\"10\">"
      << format_double(pd.m_fractions.back()) << "</text>\n";
  out << "<text x=\"" << left - 8 << "\" y=\"" << top + rows * cell
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
         "font-size=\"10\">"
      << format_double(pd.s_fractions.front()) << "</text>\n";
  out << "<text x=\"" << left - 8 << "\" y=\"" << top + cell
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
         "font-size=\"10\">"
      << format_double(pd.s_fractions.back()) << "</text>\n";
  // Legend.
  for (int g = 0; g <= 10; ++g) {
    out << "<rect x=\"" << left + cols * cell + 20 << "\" y=\""
        << top + (10 - g) * (rows * cell / 11) << "\" width=\"16\" height=\""
        << rows * cell / 11 << "\" fill=\"" << shade(g / 10.0) << "\"/>\n";
  }
  out << "<text x=\"" << left + cols * cell + 40 << "\" y=\"" << top + 10
      << "\" font-family=\"sans-serif\" font-size=\"10\">1.0</text>\n";
  out << "<text x=\"" << left + cols * cell + 40 << "\" y=\""
      << top + rows * cell << "\" font-family=\"sans-serif\" "
         "font-size=\"10\">0.0</text>\n";
  out << "</svg>\n";
}

}  // namespace arcs

#endif  // ARCS_SVG_HPP
