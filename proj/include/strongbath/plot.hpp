#pragma once

#include <string>
#include <vector>

#include "strongbath/run.hpp"

namespace strongbath {

// Standalone SVG line plot. One stacked panel per entry of `panels`,
// each listing the y columns drawn against `x`. NaN samples break the
// polyline. `vlines` draws dashed vertical markers (used for the
// oscillation-period guides). Throws ColumnMissing.
void emit_plot(const ResultTable& table, const std::string& x,
               const std::vector<std::vector<std::string>>& panels,
               const std::string& out_path, const std::vector<double>& vlines = {});

}  // namespace strongbath
