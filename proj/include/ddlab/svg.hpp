#pragma once

#include <string>

namespace ddlab {

/// Renders a CSV as a standalone SVG line chart: one polyline per distinct
/// value of group_column (first-appearance order), axes with tick labels,
/// and a legend. Rows whose x or y cell is empty or non-numeric are skipped;
/// with no plottable rows the chart shows axes only. Output is
/// byte-deterministic for identical input.
void emit_svg_plot(const std::string& csv_path, const std::string& x_column,
                   const std::string& y_column, const std::string& group_column,
                   const std::string& out_path);

}  // namespace ddlab
