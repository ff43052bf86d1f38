#include <cmath>
#include <fstream>
#include <future>
#include <numbers>
#include <ostream>

#include "dada/harness.hpp"
#include "dada/lemma_checks.hpp"
#include "dada/trace_io.hpp"
#include "plot.hpp"

namespace dada::harness {
namespace {

using nlohmann::json;

struct Cell {
  SolverSpec spec;  // with every default filled in
  RunTrace trace;
  std::filesystem::path csv;
};

json problem_json(const ProblemSpec& p) {
  if (p.instance_file) return {{"instance", p.instance_file->string()}};
  json doc = p.params;
  doc["kind"] = p.kind;
  doc["seed"] = p.seed;
  return doc;
}

json solver_json(const SolverSpec& s) {
  json doc{{"kind", to_string(s.kind)}, {"label", s.label}};
  if (s.c) doc["c"] = *s.c;
  if (s.rbar) doc["rbar"] = *s.rbar;
  if (s.d0_hat) doc["d0_hat"] = *s.d0_hat;
  return doc;
}

json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

// Best value against oracle calls at roughly 20 points per decade, always
// including the first and last row. Call counts are strictly increasing.
json best_value_series(const RunTrace& trace) {
  json series = json::array();
  std::int64_t next = 1;
  for (const TraceRow& row : trace.rows) {
    const std::int64_t calls = row.k + 1;
    if (calls >= next || &row == &trace.rows.back()) {
      series.push_back({calls, row.best_f});
      while (next <= calls) next = std::max(next + 1, static_cast<std::int64_t>(std::ceil(next * 1.122)));
    }
  }
  return series;
}

json check_entry(const std::string& label, const std::string& name, bool passed, double violation) {
  return {{"solver", label}, {"name", name}, {"passed", passed}, {"max_violation", violation}};
}

// Diagnostics that apply to a finished trace; empty when x* is unknown.
json trace_checks(const Cell& cell, const FirstOrderOracle& oracle, const NormContext& ctx) {
  json checks = json::array();
  const RunTrace& t = cell.trace;
  if (!t.has_solution_diagnostics()) return checks;
  const std::string& label = cell.spec.label;
  if (t.solver == SolverKind::kDada) {
    const auto dist = check_r_upper_d(t);
    checks.push_back(check_entry(label, "r-upper-d", dist.passed(),
                                 std::max(dist.rbar_violation, dist.D_violation)));
    const auto rc = rate_constants_for(t);
    const auto margins = rate_envelope(t, rc);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < margins.size(); ++k) {
      worst = std::max(worst, -margins[k] / dada::rate_envelope(static_cast<int>(k + 1), rc));
    }
    checks.push_back(check_entry(label, "rate-envelope", worst <= 1e-10, worst));
    if (t.full_retention) {
      const double v = check_coefficient_placing(t);
      checks.push_back(check_entry(label, "coefficient-placing", v <= 1e-8, v));
    }
  }
  if (t.full_retention && t.solver != SolverKind::kSimplifiedDog) {
    const double v = check_da_convergence_lemma(t, *oracle.known_solution, ctx);
    checks.push_back(check_entry(label, "da-convergence", v <= 1e-8, v));
  }
  if (oracle.class_info && oracle.known_optimum && !t.rows.empty()) {
    const auto r = check_omega_upper(t, *oracle.known_optimum, *oracle.class_info);
    const double scale = std::max(1.0, std::abs(*oracle.known_optimum));
    const double v = (r.residual - r.bound) / scale;
    checks.push_back(check_entry(label, "omega-upper", v <= 1e-12, v));
  }
  return checks;
}

std::filesystem::path sidecar(std::filesystem::path csv) { return csv.replace_extension(".meta.json"); }

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  std::optional<ProblemInstance> instance;
  std::optional<NormContext> ctx;
  FeasibleSet Q;
  Vector x0;
  try {
    cfg = load_config(opts.config);
    instance = build_problem(cfg.problem);
    const Eigen::Index d = problem_dimension(*instance);
    ctx = build_norm(cfg.norm, d);
    Q = build_set(cfg.set, d);
    x0 = resolve_x0(cfg, d);
    try {
      validate(Q, *ctx);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("field 'set': ") + e.what());
    }
    if (!contains(Q, *ctx, x0)) throw ConfigError("field 'x0': not inside the feasible set");
    for (std::size_t i = 0; i < cfg.solvers.size(); ++i) {
      SolverSpec& s = cfg.solvers[i];
      if (s.kind == SolverKind::kDada && !s.c) s.c = kDefaultC;
      if (s.kind != SolverKind::kWda && !s.rbar) s.rbar = default_rbar(*ctx, x0);
      if (s.kind == SolverKind::kWda && !s.d0_hat) {
        s.d0_hat = ctx->primal_norm(x0);
        if (!(*s.d0_hat > 0.0)) {
          throw ConfigError("field 'solvers[" + std::to_string(i) + "].d0_hat': required when x0 = 0");
        }
      }
    }
  } catch (const ConfigError& e) {
    err << opts.config.string() << ": " << e.what() << '\n';
    return kExitUsage;
  }
  const bool retain = opts.retain_full || cfg.retain_full;
  const std::filesystem::path dir = opts.out ? *opts.out : cfg.out ? *cfg.out : std::filesystem::path("run");
  std::filesystem::create_directories(dir);

  const FirstOrderOracle oracle = make_oracle(*instance, *ctx);
  const std::string problem_name = problem_kind(*instance);

  // Cells share only immutable state; each writes its own files.
  std::vector<std::future<Cell>> pending;
  for (const SolverSpec& spec : cfg.solvers) {
    pending.push_back(std::async(std::launch::async, [&, spec] {
      Cell cell{spec, {}, dir / (spec.label + ".trace.csv")};
      switch (spec.kind) {
        case SolverKind::kDada: {
          DadaConfig c;
          c.rbar = *spec.rbar;
          c.c = *spec.c;
          c.T = cfg.T;
          c.x0 = x0;
          c.retain_full = retain;
          cell.trace = run_dada(oracle, *ctx, Q, c);
          break;
        }
        case SolverKind::kWda: {
          WdaConfig c;
          c.d0_hat = *spec.d0_hat;
          c.T = cfg.T;
          c.x0 = x0;
          c.retain_full = retain;
          cell.trace = run_wda(oracle, *ctx, Q, c);
          break;
        }
        case SolverKind::kSimplifiedDog: {
          DogConfig c;
          c.rbar = *spec.rbar;
          c.T = cfg.T;
          c.x0 = x0;
          c.retain_full = retain;
          cell.trace = run_dog_simplified(oracle, *ctx, Q, c);
          break;
        }
      }
      write_trace_csv(cell.csv, cell.trace);
      json meta = trace_summary_json(cell.trace);
      meta["label"] = spec.label;
      meta["problem"] = problem_name;
      meta["f_star"] = oracle.known_optimum ? json(*oracle.known_optimum) : json(nullptr);
      write_json(sidecar(cell.csv), meta);
      return cell;
    }));
  }
  std::vector<Cell> cells;
  for (auto& f : pending) cells.push_back(f.get());

  json config{{"problem", problem_json(cfg.problem)},
              {"norm", cfg.norm},
              {"set", cfg.set},
              {"T", cfg.T},
              {"x0", vector_json(x0)},
              {"retain_full", retain},
              {"out", dir.string()}};
  config["solvers"] = json::array();
  for (const Cell& c : cells) config["solvers"].push_back(solver_json(c.spec));

  json results = json::array();
  json checks = json::array();
  std::vector<PlotSeries> series;
  bool numeric_failure = false;
  for (const Cell& c : cells) {
    json r = trace_summary_json(c.trace);
    r["label"] = c.spec.label;
    r["trace"] = c.csv.filename().string();
    r["f_star"] = oracle.known_optimum ? json(*oracle.known_optimum) : json(nullptr);
    if (oracle.known_optimum && !c.trace.rows.empty()) {
      r["best_f_minus_fstar"] = c.trace.best_f - *oracle.known_optimum;
    }
    r["series"] = best_value_series(c.trace);
    results.push_back(r);
    for (auto& entry : trace_checks(c, oracle, *ctx)) checks.push_back(entry);
    series.push_back({c.spec.label, c.trace.rows, oracle.known_optimum});
    numeric_failure |= c.trace.termination == Termination::kNumericFailure;

    out << c.spec.label << ": " << to_string(c.trace.termination) << ", " << c.trace.oracle_calls
        << " oracle calls, best f = " << (c.trace.rows.empty() ? std::string("n/a") : format_double(c.trace.best_f));
    if (!c.trace.message.empty() && c.trace.termination == Termination::kNumericFailure) {
      out << " (" << c.trace.message << ")";
    }
    out << '\n';
  }

  write_json(dir / "summary.json",
             {{"config", config}, {"results", results}, {"checks", checks}, {"fingerprint", fingerprint(cfg.problem.seed)}});
  std::ofstream plot(dir / "plot_data.csv");
  write_plot_csv(plot, series);
  out << "wrote " << (dir / "summary.json").string() << '\n';
  if (numeric_failure) {
    err << "numeric failure in at least one run; partial traces were kept\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace dada::harness
