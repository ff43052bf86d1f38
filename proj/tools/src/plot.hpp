#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dada/solvers.hpp"

namespace dada::harness {

struct PlotSeries {
  std::string label;
  std::vector<TraceRow> rows;
  std::optional<double> f_star;
};

/// True when every series knows f*, so residuals can be plotted.
bool residual_mode(const std::vector<PlotSeries>& series);

/// Long-format CSV `solver,k,best_f_minus_fstar` (or `solver,k,best_f`
/// preceded by a comment line naming the series without f*).
void write_plot_csv(std::ostream& out, const std::vector<PlotSeries>& series);

/// Log-log line chart of the plotted value against oracle calls (k + 1).
std::string render_svg(const std::vector<PlotSeries>& series);

}  // namespace dada::harness
