#include "phasesep/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace phasesep {

namespace {

constexpr double kW = 860.0;
constexpr double kH = 540.0;
constexpr double kMargin = 60.0;

const char* kSeriesColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                               "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string line_chart_svg(const std::vector<double>& xs,
                           const std::vector<std::pair<std::string, std::vector<double>>>& series,
                           const std::string& x_label, const std::string& y_label) {
  if (xs.size() < 2 || series.empty()) {
    throw std::invalid_argument("line chart needs at least two samples and one series");
  }
  for (const auto& s : series) {
    if (s.second.size() != xs.size()) {
      throw std::invalid_argument("series '" + s.first + "' length mismatch");
    }
  }
  double x_min = xs.front();
  double x_max = xs.front();
  for (double v : xs) {
    x_min = std::min(x_min, v);
    x_max = std::max(x_max, v);
  }
  double y_min = series[0].second[0];
  double y_max = y_min;
  for (const auto& s : series) {
    for (double v : s.second) {
      y_min = std::min(y_min, v);
      y_max = std::max(y_max, v);
    }
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) y_max = y_min + 1.0;
  const double px = (kW - 2.0 * kMargin) / (x_max - x_min);
  const double py = (kH - 2.0 * kMargin) / (y_max - y_min);
  auto sx = [&](double v) { return kMargin + (v - x_min) * px; };
  auto sy = [&](double v) { return kH - kMargin - (v - y_min) * py; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\""
     << kH << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << kMargin << "\" y1=\"" << kH - kMargin << "\" x2=\"" << kW - kMargin
     << "\" y2=\"" << kH - kMargin << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin
     << "\" y2=\"" << kH - kMargin << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 15 << "\" text-anchor=\"middle\" "
     << "font-size=\"14\">" << xml_escape(x_label) << "</text>\n";
  os << "<text x=\"18\" y=\"" << kH / 2 << "\" text-anchor=\"middle\" font-size=\"14\" "
     << "transform=\"rotate(-90 18 " << kH / 2 << ")\">" << xml_escape(y_label)
     << "</text>\n";
  // extremal tick labels
  os << "<text x=\"" << kMargin << "\" y=\"" << kH - kMargin + 18
     << "\" font-size=\"12\" text-anchor=\"middle\">" << num(x_min) << "</text>\n";
  os << "<text x=\"" << kW - kMargin << "\" y=\"" << kH - kMargin + 18
     << "\" font-size=\"12\" text-anchor=\"middle\">" << num(x_max) << "</text>\n";
  os << "<text x=\"" << kMargin - 8 << "\" y=\"" << sy(y_min) + 4
     << "\" font-size=\"12\" text-anchor=\"end\">" << num(y_min) << "</text>\n";
  os << "<text x=\"" << kMargin - 8 << "\" y=\"" << sy(y_max) + 4
     << "\" font-size=\"12\" text-anchor=\"end\">" << num(y_max) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kSeriesColors[k % (sizeof(kSeriesColors) / sizeof(char*))];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      os << num(sx(xs[i])) << ',' << num(sy(series[k].second[i]));
      if (i + 1 < xs.size()) os << ' ';
    }
    os << "\"/>\n";
    os << "<text x=\"" << kW - kMargin + 6 << "\" y=\"" << kMargin + 16.0 * k
       << "\" font-size=\"12\" fill=\"" << color << "\">" << xml_escape(series[k].first)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string heatmap_svg(const WignerGrid& grid, int max_cells) {
  grid.validate();
  if (max_cells < 8) {
    throw std::invalid_argument("heatmap needs at least 8 cells per axis");
  }
  const int bp = (grid.np() + max_cells - 1) / max_cells;  // block sizes
  const int bx = (grid.nx() + max_cells - 1) / max_cells;
  const int rows = (grid.np() + bp - 1) / bp;
  const int cols = (grid.nx() + bx - 1) / bx;

  GridArray blocks(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int i0 = r * bp;
      const int j0 = c * bx;
      const int ni = std::min(bp, grid.np() - i0);
      const int nj = std::min(bx, grid.nx() - j0);
      blocks(r, c) = grid.values.block(i0, j0, ni, nj).mean();
    }
  }
  const double scale = std::max(blocks.abs().maxCoeff(), 1e-300);

  const double cell_w = (kW - 2.0 * kMargin) / cols;
  const double cell_h = (kH - 2.0 * kMargin) / rows;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\""
     << kH << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double v = blocks(r, c) / scale;  // in [-1, 1]
      int red;
      int green;
      int blue;
      if (v >= 0.0) {
        red = 255 - static_cast<int>(std::lround(75.0 * v));
        green = 255 - static_cast<int>(std::lround(251.0 * v));
        blue = 255 - static_cast<int>(std::lround(217.0 * v));
      } else {
        red = 255 - static_cast<int>(std::lround(-196.0 * v));
        green = 255 - static_cast<int>(std::lround(-179.0 * v));
        blue = 255 - static_cast<int>(std::lround(-63.0 * v));
      }
      // row 0 is the lowest momentum; draw it at the bottom
      const double x = kMargin + c * cell_w;
      const double y = kH - kMargin - (r + 1) * cell_h;
      os << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(cell_w + 0.5)
         << "\" height=\"" << num(cell_h + 0.5) << "\" fill=\"rgb(" << red << ',' << green
         << ',' << blue << ")\"/>\n";
    }
  }
  os << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 15
     << "\" text-anchor=\"middle\" font-size=\"14\">x</text>\n";
  os << "<text x=\"18\" y=\"" << kH / 2 << "\" text-anchor=\"middle\" font-size=\"14\" "
     << "transform=\"rotate(-90 18 " << kH / 2 << ")\">p</text>\n";
  os << "<text x=\"" << kMargin << "\" y=\"" << kH - kMargin + 18
     << "\" font-size=\"12\" text-anchor=\"middle\">" << num(-grid.x_max) << "</text>\n";
  os << "<text x=\"" << kW - kMargin << "\" y=\"" << kH - kMargin + 18
     << "\" font-size=\"12\" text-anchor=\"middle\">" << num(grid.x_max) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace phasesep
