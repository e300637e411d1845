#pragma once

#include <string>
#include <utility>
#include <vector>

#include "phasesep/wigner_grid.hpp"

namespace phasesep {

/// Minimal dependency-free plotting used by the command line tool's --svg
/// option; output is deterministic for identical inputs.

/// Polyline chart of one or more named series over a shared abscissa.
std::string line_chart_svg(const std::vector<double>& xs,
                           const std::vector<std::pair<std::string, std::vector<double>>>& series,
                           const std::string& x_label, const std::string& y_label);

/// Diverging-palette heatmap of a grid (blue negative, white zero, red
/// positive), block-averaged down to at most max_cells per axis.
std::string heatmap_svg(const WignerGrid& grid, int max_cells = 160);

}  // namespace phasesep
