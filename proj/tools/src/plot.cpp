#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "dada/trace_io.hpp"

namespace dada::harness {
namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 440;
constexpr double kLeft = 70;
constexpr double kRight = 170;
constexpr double kTop = 20;
constexpr double kBottom = 50;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                               "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

double plotted(const PlotSeries& s, const TraceRow& row, bool residual) {
  return residual ? row.best_f - *s.f_star : row.best_f;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      default:
        out += ch;
    }
  }
  return out;
}

}  // namespace

bool residual_mode(const std::vector<PlotSeries>& series) {
  return std::all_of(series.begin(), series.end(), [](const PlotSeries& s) { return s.f_star.has_value(); });
}

void write_plot_csv(std::ostream& out, const std::vector<PlotSeries>& series) {
  const bool residual = residual_mode(series);
  if (!residual) {
    out << "# f* unknown for:";
    for (const auto& s : series) {
      if (!s.f_star) out << ' ' << s.label;
    }
    out << "; column is raw best_f\n";
  }
  out << "solver,k," << (residual ? "best_f_minus_fstar" : "best_f") << '\n';
  for (const auto& s : series) {
    for (const auto& row : s.rows) {
      out << s.label << ',' << row.k << ',' << format_double(plotted(s, row, residual)) << '\n';
    }
  }
}

std::string render_svg(const std::vector<PlotSeries>& series) {
  const bool residual = residual_mode(series);
  double x_max = 1.0;
  double y_min = std::numeric_limits<double>::infinity();
  double y_max = -std::numeric_limits<double>::infinity();
  for (const auto& s : series) {
    for (const auto& row : s.rows) {
      x_max = std::max(x_max, static_cast<double>(row.k + 1));
      const double y = plotted(s, row, residual);
      if (y > 0.0 && std::isfinite(y)) {
        y_min = std::min(y_min, y);
        y_max = std::max(y_max, y);
      }
    }
  }
  if (!(y_min <= y_max)) {
    y_min = 1e-1;
    y_max = 1.0;
  }
  const double lx_max = std::max(1.0, std::ceil(std::log10(x_max)));
  double ly_min = std::floor(std::log10(y_min));
  double ly_max = std::ceil(std::log10(y_max));
  if (ly_max <= ly_min) ly_max = ly_min + 1;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + std::log10(x) / lx_max * plot_w; };
  const auto py = [&](double y) { return kTop + (ly_max - std::log10(y)) / (ly_max - ly_min) * plot_h; };

  std::ostringstream svg;
  svg.precision(6);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int e = 0; e <= static_cast<int>(lx_max); ++e) {
    const double x = px(std::pow(10.0, e));
    svg << "<line x1=\"" << x << "\" y1=\"" << kTop << "\" x2=\"" << x << "\" y2=\"" << kTop + plot_h
        << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << x << "\" y=\"" << kTop + plot_h + 15 << "\" text-anchor=\"middle\">1e" << e
        << "</text>\n";
  }
  const int y_step = std::max(1, static_cast<int>(std::ceil((ly_max - ly_min) / 10)));
  for (int e = static_cast<int>(ly_min); e <= static_cast<int>(ly_max); e += y_step) {
    const double y = py(std::pow(10.0, e));
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kLeft + plot_w << "\" y2=\"" << y
        << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e" << e << "</text>\n";
  }
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\">oracle calls</text>\n";
  svg << "<text transform=\"translate(16," << kTop + plot_h / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << (residual ? "best f - f*" : "best f") << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = kColors[i % std::size(kColors)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    double last_x = -1.0;
    for (const auto& row : s.rows) {
      const double y = plotted(s, row, residual);
      if (!(y > 0.0) || !std::isfinite(y)) continue;
      const double x = px(static_cast<double>(row.k + 1));
      // Skip points that land on the same horizontal pixel.
      if (x - last_x < 0.5 && &row != &s.rows.back()) continue;
      last_x = x;
      svg << x << ',' << py(y) << ' ';
    }
    svg << "\"/>\n";
    const double ly = kTop + 14 + 16 * static_cast<double>(i);
    svg << "<line x1=\"" << kWidth - kRight + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << kWidth - kRight + 32
        << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << kWidth - kRight + 38 << "\" y=\"" << ly << "\">" << escape(s.label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace dada::harness
