#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <ostream>

#include "dada/harness.hpp"
#include "dada/lemma_checks.hpp"
#include "dada/problems.hpp"
#include "dada/rng.hpp"
#include "dada/theory.hpp"

namespace dada::harness {
namespace {

using nlohmann::json;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::int64_t kDeskT = 2000;

struct Desk {
  std::string name;
  FirstOrderOracle oracle;
  NormContext ctx;
};

// Small instances of every shipped problem, all with known x*.
std::vector<Desk> desk_problems(std::uint64_t seed) {
  std::vector<Desk> out;
  const auto id50 = NormContext::identity(50);
  out.push_back({"quadratic", make_quadratic_oracle(id50), id50});
  const auto diag = NormContext::diagonal(Vector::LinSpaced(20, 0.5, 4.0));
  out.push_back({"quadratic-diag", make_quadratic_oracle(diag), diag});
  const auto id200 = NormContext::identity(200);
  out.push_back({"softmax", make_oracle(std::make_shared<const SoftmaxProblem>(gen_softmax(100, 200, 0.1, seed + 1))),
                 id200});
  const auto id100 = NormContext::identity(100);
  out.push_back({"worst-case-p3", make_oracle(WorstCaseProblem{100, 3.0}), id100});
  out.push_back({"worst-case-p4", make_oracle(WorstCaseProblem{100, 4.0}), id100});
  out.push_back({"polyhedron-q1.5",
                 make_oracle(std::make_shared<const PolyhedronProblem>(gen_polyhedron(100, 50, 10.0, 1.5, seed + 2))),
                 id50});
  return out;
}

RunTrace dada_run(const Desk& p, bool retain, double c = kDefaultC) {
  DadaConfig cfg;
  cfg.x0 = Vector::Ones(p.ctx.dimension());
  cfg.rbar = default_rbar(p.ctx, cfg.x0);
  cfg.T = kDeskT;
  cfg.c = c;
  cfg.allow_invalid_c = !(c > std::numbers::sqrt2);
  cfg.retain_full = retain;
  return run_dada(p.oracle, p.ctx, WholeSpace{}, cfg);
}

RunTrace wda_run(const Desk& p) {
  WdaConfig cfg;
  cfg.x0 = Vector::Ones(p.ctx.dimension());
  cfg.d0_hat = p.ctx.primal_norm(cfg.x0);
  cfg.T = kDeskT;
  cfg.retain_full = true;
  return run_wda(p.oracle, p.ctx, WholeSpace{}, cfg);
}

// Records the worst value per problem and overall.
struct Tally {
  double worst = kNegInf;
  json per = json::object();

  void add(const std::string& key, double v) {
    worst = std::max(worst, v);
    per[key] = per.contains(key) ? std::max(per[key].get<double>(), v) : v;
  }
};

CheckResult finish(CheckResult r, const Tally& t, double tol) {
  r.max_violation = t.worst;
  r.passed = t.worst <= tol;
  r.details["per_case"] = t.per;
  r.details["tolerance"] = tol;
  return r;
}

CheckResult check_da_convergence(std::uint64_t seed) {
  Tally t;
  for (const Desk& p : desk_problems(seed)) {
    const Vector& xs = *p.oracle.known_solution;
    t.add(p.name + "/dada", check_da_convergence_lemma(dada_run(p, true), xs, p.ctx));
    t.add(p.name + "/wda", check_da_convergence_lemma(wda_run(p), xs, p.ctx));
  }
  return finish({"da-convergence"}, t, 1e-8);
}

CheckResult check_coefficient(std::uint64_t seed) {
  Tally t;
  for (const Desk& p : desk_problems(seed)) t.add(p.name, check_coefficient_placing(dada_run(p, false)));
  return finish({"coefficient-placing"}, t, 1e-8);
}

CheckResult check_distance(std::uint64_t seed, std::optional<double> inject_c) {
  Tally t;
  const double c = inject_c.value_or(kDefaultC);
  for (const Desk& p : desk_problems(seed)) {
    const auto report = check_r_upper_d(dada_run(p, false, c));
    t.add(p.name, std::max(report.rbar_violation, report.D_violation));
  }
  CheckResult r = finish({"r-upper-d"}, t, 1e-10);
  r.details["c"] = c;
  return r;
}

CheckResult check_envelope(std::uint64_t seed) {
  Tally t;
  for (const Desk& p : desk_problems(seed)) {
    const RunTrace trace = dada_run(p, false);
    const auto rc = rate_constants_for(trace);
    const auto margins = rate_envelope(trace, rc);
    for (std::size_t k = 0; k < margins.size(); ++k) {
      t.add(p.name, -margins[k] / dada::rate_envelope(static_cast<int>(k + 1), rc));
    }
  }
  return finish({"rate-envelope"}, t, 1e-10);
}

CheckResult check_omega(std::uint64_t seed) {
  Tally t;
  for (const Desk& p : desk_problems(seed)) {
    if (!p.oracle.class_info || !p.oracle.known_optimum) continue;
    for (std::int64_t T : {std::int64_t{10}, std::int64_t{100}, kDeskT}) {
      DadaConfig cfg;
      cfg.x0 = Vector::Ones(p.ctx.dimension());
      cfg.rbar = default_rbar(p.ctx, cfg.x0);
      cfg.T = T;
      const auto report = check_omega_upper(run_dada(p.oracle, p.ctx, WholeSpace{}, cfg),
                                            *p.oracle.known_optimum, *p.oracle.class_info);
      t.add(p.name, (report.residual - report.bound) / std::max(1.0, std::abs(*p.oracle.known_optimum)));
    }
  }
  return finish({"omega-upper"}, t, 1e-12);
}

CheckResult check_seq_min_sum(std::uint64_t seed) {
  Tally t;
  Rng rng(seed + 11);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform(0.0, 63.0));
    const double log_range = rng.uniform(0.0, std::log(1e6));
    std::vector<double> d(static_cast<std::size_t>(n));
    for (double& v : d) v = std::exp(rng.uniform(0.0, log_range));
    std::sort(d.begin(), d.end());
    const auto b = seq_min_sum_bound(d, n - 1);
    t.add("random", b.lhs / b.rhs - 1.0);
  }
  for (double rho : {1.0, 1.1, 2.0, 10.0}) {
    std::vector<double> d(65);
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = std::pow(rho, static_cast<double>(k));
    for (int T = 1; T <= 64; ++T) {
      const auto b = seq_min_sum_bound(d, T);
      t.add("geometric", b.lhs / b.rhs - 1.0);
    }
  }
  double equality_gap = 0.0;
  for (int T = 1; T <= 64; ++T) {
    const std::vector<double> ones(static_cast<std::size_t>(T) + 1, 1.0);
    const auto b = seq_min_sum_bound(ones, T);
    equality_gap = std::max(equality_gap, std::abs(b.lhs - b.rhs) / b.rhs);
  }
  CheckResult r = finish({"seq-min-sum"}, t, 1e-12);
  r.details["constant_sequence_gap"] = equality_gap;
  r.passed = r.passed && equality_gap <= 1e-12;
  return r;
}

CheckResult check_bound_induction(std::uint64_t seed) {
  Tally t;
  Rng rng(seed + 13);
  std::uint64_t trial_seed = seed * 1000003;
  for (double R : {0.0, 0.5, 1.0, 10.0}) {
    for (double gamma : {0.0, 0.3, 0.9}) {
      const std::string key = "R=" + std::to_string(R).substr(0, 4) + ",gamma=" + std::to_string(gamma).substr(0, 3);
      const double scale = std::max(1.0, R / (1.0 - gamma));
      for (int i = 0; i < 500; ++i) {
        const double d0 = rng.uniform(0.0, 2.0 * scale);
        const auto res = bound_induction_trial(d0, R, gamma, 200, ++trial_seed);
        t.add(key, res.held ? (res.max_iterate - res.bound) / std::max(1.0, res.bound) : 1.0);
      }
    }
  }
  return finish({"bound-induction"}, t, 1e-12);
}

double log_uniform(Rng& rng, double lo, double hi) { return std::exp(rng.uniform(std::log(lo), std::log(hi))); }

double constant(Rng& rng) { return rng.uniform(0.0, 1.0) < 0.25 ? 0.0 : log_uniform(rng, 1e-3, 1e3); }

ClassSpec random_class(Rng& rng, int variant) {
  switch (variant % 6) {
    case 0:
      return LipschitzClass{constant(rng)};
    case 1:
      return LipschitzSmoothClass{constant(rng), constant(rng)};
    case 2:
      return HolderSmoothClass{rng.uniform(0.0, 1.0), constant(rng), constant(rng)};
    case 3: {
      HighOrderClass c;
      c.p = 2 + static_cast<int>(rng.uniform(0.0, 4.0));
      c.Lp = constant(rng);
      for (int i = 2; i <= c.p; ++i) c.derivative_norms[i] = constant(rng);
      c.g_star = constant(rng);
      return c;
    }
    case 4:
      return QscClass{constant(rng), constant(rng), constant(rng)};
    default:
      return L0L1SmoothClass{constant(rng), constant(rng), constant(rng)};
  }
}

CheckResult check_delta_omega(std::uint64_t seed) {
  Rng rng(seed + 17);
  Tally growth;
  double holder_gap = 0.0;
  double composition_gap = 0.0;
  double monotone = kNegInf;
  std::vector<double> eps_grid;
  for (int i = 0; i <= 24; ++i) eps_grid.push_back(std::pow(10.0, -6.0 + 0.25 * i));
  for (int i = 0; i < 600; ++i) {
    const ClassSpec spec = random_class(rng, i);
    double previous = 0.0;
    for (double eps : eps_grid) {
      const double delta = delta_eps(spec, eps);
      monotone = std::max(monotone, previous - delta);
      previous = delta;
      if (std::isfinite(delta)) growth.add(class_name(spec), growth_upper_bound(spec, delta) / eps - 1.0);
    }
    const double eps = log_uniform(rng, 1e-6, 1.0);
    const auto rc = RateConstants::from(log_uniform(rng, 1e-3, 1e2), log_uniform(rng, 1e-8, 1.0), 3.0);
    const double direct = complexity_T(spec, eps, rc);
    const double composed = complexity_T_v(delta_eps(spec, eps), rc);
    if (composed > 0.0) composition_gap = std::max(composition_gap, std::abs(direct - composed) / composed);
    else composition_gap = std::max(composition_gap, std::abs(direct));
  }
  for (double L1 : {0.1, 1.0, 30.0}) {
    for (double g : {0.0, 0.7}) {
      for (double eps : eps_grid) {
        const double a = delta_eps(HolderSmoothClass{1.0, L1, g}, eps);
        const double b = delta_eps(LipschitzSmoothClass{L1, g}, eps);
        holder_gap = std::max(holder_gap, std::abs(a - b) / b);
      }
    }
  }
  CheckResult r = finish({"delta-omega"}, growth, 1e-9);
  r.details["holder_vs_smooth_gap"] = holder_gap;
  r.details["composition_gap"] = composition_gap;
  r.details["monotonicity_violation"] = monotone;
  r.passed = r.passed && holder_gap <= 1e-12 && composition_gap <= 1e-9 && monotone <= 0.0;
  return r;
}

CheckResult check_growth_empirical(std::uint64_t seed) {
  Tally t;
  Rng rng(seed + 19);
  const auto ctx = NormContext::identity(50);
  const auto oracle = make_quadratic_oracle(ctx);
  const LipschitzSmoothClass spec{1.0, 0.0};
  for (double eps : {1e-4, 1e-2, 1.0}) {
    const double radius = delta_eps(spec, eps);
    for (int i = 0; i < 200; ++i) {
      const Vector x = rng.on_sphere(50, radius);
      t.add("eps=" + std::to_string(eps), (oracle.evaluate(x).value - 0.0) / eps - 1.0);
    }
  }
  return finish({"growth-empirical"}, t, 0.0);
}

CheckResult check_gradients(std::uint64_t seed) {
  Tally t;
  Rng rng(seed + 23);
  std::vector<std::pair<std::string, FirstOrderOracle>> oracles;
  oracles.emplace_back("softmax",
                       make_oracle(std::make_shared<const SoftmaxProblem>(gen_softmax(100, 200, 0.1, seed + 1))));
  oracles.emplace_back("worst-case-p2", make_oracle(WorstCaseProblem{100, 2.0}));
  oracles.emplace_back("worst-case-p4", make_oracle(WorstCaseProblem{100, 4.0}));
  oracles.emplace_back("polyhedron-q2",
                       make_oracle(std::make_shared<const PolyhedronProblem>(gen_polyhedron(100, 50, 10.0, 2.0, seed + 2))));
  for (const auto& [name, oracle] : oracles) {
    for (int i = 0; i < 20; ++i) {
      const Vector x = rng.uniform_vector(oracle.dimension, -1.0, 1.0);
      t.add(name, fd_gradient_check(oracle, x, 1e-6));
    }
  }
  return finish({"gradient-check"}, t, 1e-5);
}

CheckResult check_construction(std::uint64_t seed) {
  Tally t;
  std::size_t nonzero = 0;
  for (std::uint64_t s = seed; s < seed + 50; ++s) {
    const auto soft = gen_softmax(100, 200, 0.1, s);
    const double gnorm = softmax_eval(soft, Vector::Zero(200)).subgradient.norm();
    const double row_max = soft.A.rowwise().norm().maxCoeff();
    t.add("softmax", gnorm / (1e-10 * row_max) - 1.0);
    for (double q : {1.0, 1.5, 2.0}) {
      const auto poly = gen_polyhedron(100, 50, 10.0, q, s);
      const double f = polyhedron_eval(poly, poly.planted_solution).value;
      if (f != 0.0) ++nonzero;
      t.add("polyhedron", f == 0.0 ? -1.0 : f);
    }
  }
  CheckResult r = finish({"construction"}, t, 0.0);
  r.details["polyhedron_nonzero_optima"] = nonzero;
  return r;
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{
      "da-convergence", "coefficient-placing", "r-upper-d",        "rate-envelope",  "omega-upper",
      "seq-min-sum",    "bound-induction",     "delta-omega",      "growth-empirical", "gradient-check",
      "construction"};
  return names;
}

CheckResult run_check(const std::string& name, std::uint64_t seed, std::optional<double> inject_c) {
  const auto start = std::chrono::steady_clock::now();
  CheckResult r;
  if (name == "da-convergence") r = check_da_convergence(seed);
  else if (name == "coefficient-placing") r = check_coefficient(seed);
  else if (name == "r-upper-d") r = check_distance(seed, inject_c);
  else if (name == "rate-envelope") r = check_envelope(seed);
  else if (name == "omega-upper") r = check_omega(seed);
  else if (name == "seq-min-sum") r = check_seq_min_sum(seed);
  else if (name == "bound-induction") r = check_bound_induction(seed);
  else if (name == "delta-omega") r = check_delta_omega(seed);
  else if (name == "growth-empirical") r = check_growth_empirical(seed);
  else if (name == "gradient-check") r = check_gradients(seed);
  else if (name == "construction") r = check_construction(seed);
  else throw std::invalid_argument("unknown check '" + name + "'");
  r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
  std::vector<std::string> selected = check_names();
  if (opts.check && *opts.check != "all") {
    if (std::find(selected.begin(), selected.end(), *opts.check) == selected.end()) {
      err << "unknown check '" << *opts.check << "'; available: all";
      for (const auto& n : check_names()) err << ", " << n;
      err << '\n';
      return kExitUsage;
    }
    selected = {*opts.check};
  }
  json checks = json::array();
  bool all_passed = true;
  double total = 0.0;
  for (const auto& name : selected) {
    CheckResult r;
    try {
      r = run_check(name, opts.seed, opts.inject_c);
    } catch (const std::exception& e) {
      r.name = name;
      r.passed = false;
      r.max_violation = std::numeric_limits<double>::infinity();
      r.details["error"] = e.what();
    }
    all_passed &= r.passed;
    total += r.runtime_seconds;
    out << (r.passed ? "PASS " : "FAIL ") << r.name << "  max_violation=" << r.max_violation << "  ("
        << r.runtime_seconds << " s)\n";
    checks.push_back({{"name", r.name},
                      {"passed", r.passed},
                      {"max_violation", std::isfinite(r.max_violation) ? json(r.max_violation) : json(nullptr)},
                      {"runtime_seconds", r.runtime_seconds},
                      {"details", r.details}});
  }
  json report{{"checks", checks},
              {"passed", all_passed},
              {"total_runtime_seconds", total},
              {"fingerprint", fingerprint(opts.seed)}};
  if (opts.inject_c) report["injected_c"] = *opts.inject_c;
  const std::filesystem::path path = opts.report.value_or("verify_report.json");
  std::ofstream file(path);
  if (!file) {
    err << "cannot write report " << path.string() << '\n';
    return kExitFailure;
  }
  file << report.dump(2) << '\n';
  out << (all_passed ? "all checks passed" : "some checks failed") << "; report: " << path.string() << '\n';
  return all_passed ? kExitOk : kExitFailure;
}

}  // namespace dada::harness
