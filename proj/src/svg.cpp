#include "ddlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <vector>

#include "ddlab/csv.hpp"
#include "ddlab/errors.hpp"

namespace ddlab {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 640.0;   // legend lives to the right of this
constexpr double kTop = 30.0;
constexpr double kBottom = 470.0;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c",
                          "#d62728", "#9467bd", "#8c564b"};

struct Series {
  std::string key;
  std::vector<std::pair<double, double>> points;
};

bool parse_cell(const std::string& cell, double* out) {
  if (cell.empty()) return false;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size()) return false;
  if (!std::isfinite(v)) return false;
  *out = v;
  return true;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

void emit_svg_plot(const std::string& csv_path, const std::string& x_column,
                   const std::string& y_column, const std::string& group_column,
                   const std::string& out_path) {
  const CsvTable table = read_csv(csv_path);
  const std::size_t xi = table.column(x_column);
  const std::size_t yi = table.column(y_column);
  const std::size_t gi = table.column(group_column);

  std::vector<Series> series;
  for (const auto& row : table.rows) {
    if (row.size() <= std::max({xi, yi, gi})) continue;
    double x, y;
    if (!parse_cell(row[xi], &x) || !parse_cell(row[yi], &y)) continue;
    const std::string& key = row[gi];
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const Series& s) { return s.key == key; });
    if (it == series.end()) {
      series.push_back({key, {}});
      it = series.end() - 1;
    }
    it->points.emplace_back(x, y);
  }

  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  bool have = false;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (!have) {
        xmin = xmax = x;
        ymin = ymax = y;
        have = true;
      } else {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
      }
    }
  if (xmax - xmin <= 0.0) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax - ymin <= 0.0) {
    ymin -= 0.5;
    ymax += 0.5;
  }

  const auto px = [&](double x) {
    return kLeft + (x - xmin) / (xmax - xmin) * (kRight - kLeft);
  };
  const auto py = [&](double y) {
    return kBottom - (y - ymin) / (ymax - ymin) * (kBottom - kTop);
  };

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot open \"" + out_path + "\" for writing");

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // axes
  out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kBottom)
      << "\" x2=\"" << num(kRight) << "\" y2=\"" << num(kBottom)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\""
      << num(kLeft) << "\" y2=\"" << num(kBottom)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";

  for (int i = 0; i <= 5; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 5.0;
    const double fy = ymin + (ymax - ymin) * i / 5.0;
    const double tx = px(fx);
    const double ty = py(fy);
    out << "<line x1=\"" << num(tx) << "\" y1=\"" << num(kBottom) << "\" x2=\""
        << num(tx) << "\" y2=\"" << num(kBottom + 5) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(tx) << "\" y=\"" << num(kBottom + 20)
        << "\" font-size=\"12\" text-anchor=\"middle\">" << tick_label(fx)
        << "</text>\n";
    out << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(ty)
        << "\" x2=\"" << num(kLeft) << "\" y2=\"" << num(ty)
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(ty + 4)
        << "\" font-size=\"12\" text-anchor=\"end\">" << tick_label(fy)
        << "</text>\n";
  }

  out << "<text x=\"" << num(0.5 * (kLeft + kRight)) << "\" y=\""
      << num(kHeight - 10) << "\" font-size=\"14\" text-anchor=\"middle\">"
      << x_column << "</text>\n";
  out << "<text x=\"18\" y=\"" << num(0.5 * (kTop + kBottom))
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << num(0.5 * (kTop + kBottom)) << ")\">" << y_column << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % (sizeof kPalette / sizeof kPalette[0])];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : series[k].points)
      out << num(px(x)) << "," << num(py(y)) << " ";
    out << "\"/>\n";
    // legend entry
    const double ly = kTop + 18.0 * static_cast<double>(k);
    out << "<line x1=\"" << num(kRight + 14) << "\" y1=\"" << num(ly)
        << "\" x2=\"" << num(kRight + 38) << "\" y2=\"" << num(ly)
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << num(kRight + 44) << "\" y=\"" << num(ly + 4)
        << "\" font-size=\"12\">" << group_column << "=" << series[k].key
        << "</text>\n";
  }

  out << "</svg>\n";
  if (!out) throw IoError("failed writing \"" + out_path + "\"");
}

}  // namespace ddlab
