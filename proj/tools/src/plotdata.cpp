#include <fstream>
#include <ostream>

#include "dada/harness.hpp"
#include "dada/trace_io.hpp"
#include "plot.hpp"

namespace dada::harness {

int cmd_plotdata(const PlotOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.traces.empty()) {
    err << "plotdata: no traces given\n";
    return kExitUsage;
  }
  std::vector<PlotSeries> series;
  for (const auto& path : opts.traces) {
    PlotSeries s;
    s.label = path.stem().string();
    if (path.stem().extension() == ".trace") s.label = path.stem().stem().string();
    try {
      s.rows = read_trace_csv(path);
    } catch (const SchemaError& e) {
      err << path.string() << ": " << e.what() << '\n';
      return kExitUsage;
    }
    // The run command leaves solver label and f* in a sidecar next to the trace.
    std::filesystem::path meta_path = path;
    meta_path.replace_extension(".meta.json");
    if (std::ifstream meta_in(meta_path); meta_in) {
      try {
        const auto meta = nlohmann::json::parse(meta_in);
        if (meta.contains("label") && meta["label"].is_string()) s.label = meta["label"].get<std::string>();
        if (meta.contains("f_star") && meta["f_star"].is_number()) s.f_star = meta["f_star"].get<double>();
      } catch (const nlohmann::json::exception& e) {
        err << meta_path.string() << ": ignoring unreadable metadata (" << e.what() << ")\n";
      }
    }
    series.push_back(std::move(s));
  }
  std::ofstream csv(opts.out);
  if (!csv) {
    err << "plotdata: cannot write " << opts.out.string() << '\n';
    return kExitFailure;
  }
  write_plot_csv(csv, series);
  std::filesystem::path svg_path = opts.out;
  svg_path.replace_extension(".svg");
  std::ofstream svg(svg_path);
  svg << render_svg(series);
  out << "wrote " << opts.out.string() << " and " << svg_path.string() << " (" << series.size() << " series"
      << (residual_mode(series) ? "" : ", raw best_f") << ")\n";
  return kExitOk;
}

}  // namespace dada::harness
