#include "dada/solvers.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dada/theory.hpp"

namespace dada {
namespace {

constexpr double kZeroGradient = 1e-300;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void validate_common(const FirstOrderOracle& oracle, const NormContext& ctx, const FeasibleSet& Q,
                     std::int64_t T, const Vector& x0) {
  if (!oracle.evaluate) throw std::invalid_argument("solver: oracle has no evaluate function");
  if (oracle.dimension != ctx.dimension()) {
    throw DimensionError("solver: oracle dimension does not match the norm context");
  }
  if (T < 1) throw std::invalid_argument("solver: T must be >= 1");
  ctx.check_dimension(x0, "solver x0");
  if (!all_finite(x0)) throw std::invalid_argument("solver: x0 has non-finite entries");
  validate(Q, ctx);
  if (!contains(Q, ctx, x0)) throw std::invalid_argument("solver: x0 is not in the feasible set");
}

// Bookkeeping shared by all solvers: oracle queries, the running best point,
// solution diagnostics and optional full retention.
class Recorder {
 public:
  Recorder(const FirstOrderOracle& oracle, const NormContext& ctx, RunTrace& trace)
      : oracle_(oracle), ctx_(ctx), trace_(trace) {}

  // Queries the oracle at x and appends a row (without `a`). Returns false on
  // a numeric failure, in which case the trace is already marked.
  bool observe(std::int64_t k, const Vector& x, double beta, double r, double rbar) {
    Evaluation ev;
    try {
      ev = oracle_.evaluate(x);
    } catch (const NumericError& e) {
      fail(e.what());
      return false;
    }
    ++trace_.oracle_calls;
    if (!std::isfinite(ev.value) || ev.subgradient.size() != x.size() || !all_finite(ev.subgradient)) {
      std::ostringstream msg;
      msg << "non-finite oracle output at k = " << k;
      fail(msg.str());
      return false;
    }
    gnorm_ = ctx_.dual_norm(ev.subgradient);
    if (trace_.rows.empty() || ev.value < trace_.best_f) {
      trace_.best_f = ev.value;
      trace_.best_point = x;
      trace_.best_index = k;
    }
    TraceRow row;
    row.k = k;
    row.f = ev.value;
    row.best_f = trace_.best_f;
    row.gnorm = gnorm_;
    row.beta = beta;
    row.r = r;
    row.rbar = rbar;
    if (oracle_.known_solution) {
      row.D = distance_to_solution(x);
      if (zero_gradient()) {
        row.v = 0.0;
      } else {
        const SuboptimalityMeasure v = v_measure(ev.subgradient, x, *oracle_.known_solution, ctx_);
        row.v = v.value;
        if (v.clamped) ++trace_.v_clamped;
      }
    }
    trace_.rows.push_back(row);
    if (trace_.full_retention) {
      trace_.iterates.push_back(x);
      trace_.subgradients.push_back(ev.subgradient);
    }
    g_ = std::move(ev.subgradient);
    return true;
  }

  bool zero_gradient() const { return gnorm_ < kZeroGradient; }
  const Vector& g() const { return g_; }
  double gnorm() const { return gnorm_; }
  void set_weight(double a) { trace_.rows.back().a = a; }

  void finish_zero_gradient() {
    trace_.termination = Termination::kZeroGradient;
    trace_.message = "zero subgradient: exact solution found";
  }

  // Returns false if the new iterate is not finite.
  bool accept_next(const Vector& x, std::int64_t k, double beta, double r, double rbar,
                   bool is_last) {
    if (!all_finite(x)) {
      std::ostringstream msg;
      msg << "non-finite iterate after k = " << k;
      fail(msg.str());
      return false;
    }
    if (is_last) {
      IterateTail tail{beta, r, rbar, std::nullopt};
      if (oracle_.known_solution) tail.D = distance_to_solution(x);
      trace_.tail = tail;
      if (trace_.full_retention) trace_.iterates.push_back(x);
    }
    return true;
  }

 private:
  double distance_to_solution(const Vector& x) const {
    return ctx_.primal_norm(x - *oracle_.known_solution);
  }

  void fail(const std::string& what) {
    trace_.termination = Termination::kNumericFailure;
    trace_.message = what;
  }

  const FirstOrderOracle& oracle_;
  const NormContext& ctx_;
  RunTrace& trace_;
  Vector g_;
  double gnorm_ = 0.0;
};

struct DaCoefficients {
  // Weight a_k given rbar_k and ||g_k||_*.
  std::function<double(double rbar, double gnorm)> weight;
  // beta_k for k >= 1, and the beta_0 convention for k = 0.
  std::function<double(std::int64_t k)> beta;
};

RunTrace run_dual_averaging(const FirstOrderOracle& oracle, const NormContext& ctx,
                            const FeasibleSet& Q, const Vector& x0, std::int64_t T,
                            double rbar_init, const DaCoefficients& coef, RunTrace trace) {
  const auto start = std::chrono::steady_clock::now();
  Recorder rec(oracle, ctx, trace);
  Vector s = Vector::Zero(x0.size());
  Vector x = x0;
  double r = 0.0;
  double rbar = rbar_init;
  double beta = coef.beta(0);
  for (std::int64_t k = 0; k < T; ++k) {
    if (!rec.observe(k, x, beta, r, rbar)) break;
    if (rec.zero_gradient()) {
      rec.finish_zero_gradient();
      break;
    }
    const double a = coef.weight(rbar, rec.gnorm());
    rec.set_weight(a);
    s += a * rec.g();
    beta = coef.beta(k + 1);
    x = da_argmin(Q, ctx, s, beta, x0);
    r = ctx.primal_norm(x - x0);
    rbar = std::max(rbar, r);
    if (!rec.accept_next(x, k, beta, r, rbar, k + 1 == T)) break;
  }
  trace.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return trace;
}

}  // namespace

const char* to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::kDada:
      return "dada";
    case SolverKind::kWda:
      return "wda";
    case SolverKind::kSimplifiedDog:
      return "simplified-dog";
  }
  return "unknown";
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::kBudget:
      return "budget";
    case Termination::kZeroGradient:
      return "zero-gradient";
    case Termination::kNumericFailure:
      return "numeric-failure";
  }
  return "unknown";
}

double RunTrace::d0() const {
  if (!has_solution_diagnostics() || !rows.front().D) {
    throw std::logic_error("trace has no solution diagnostics (x* unknown)");
  }
  return *rows.front().D;
}

double default_rbar(const NormContext& ctx, const Vector& x0) {
  return 1e-6 * (1.0 + ctx.primal_norm(x0));
}

RunTrace run_dada(const FirstOrderOracle& oracle, const NormContext& ctx, const FeasibleSet& Q,
                  const DadaConfig& cfg) {
  validate_common(oracle, ctx, Q, cfg.T, cfg.x0);
  if (!(cfg.rbar > 0.0) || !std::isfinite(cfg.rbar)) throw std::invalid_argument("dada: rbar must be positive");
  if (!(cfg.c > 0.0) || !std::isfinite(cfg.c)) throw std::invalid_argument("dada: c must be positive");
  if (!cfg.allow_invalid_c && !(cfg.c > std::numbers::sqrt2)) {
    throw std::invalid_argument("dada: c must exceed sqrt(2)");
  }
  RunTrace trace;
  trace.solver = SolverKind::kDada;
  trace.c = cfg.c;
  trace.rbar_init = cfg.rbar;
  trace.full_retention = cfg.retain_full;
  const double c = cfg.c;
  DaCoefficients coef{
      [](double rbar, double gnorm) { return rbar / gnorm; },
      [c](std::int64_t k) { return c * std::sqrt(static_cast<double>(k) + 1.0); },
  };
  return run_dual_averaging(oracle, ctx, Q, cfg.x0, cfg.T, cfg.rbar, coef, std::move(trace));
}

RunTrace run_wda(const FirstOrderOracle& oracle, const NormContext& ctx, const FeasibleSet& Q,
                 const WdaConfig& cfg) {
  validate_common(oracle, ctx, Q, cfg.T, cfg.x0);
  if (!(cfg.d0_hat > 0.0) || !std::isfinite(cfg.d0_hat)) {
    throw std::invalid_argument("wda: d0_hat must be positive");
  }
  RunTrace trace;
  trace.solver = SolverKind::kWda;
  trace.d0_hat = cfg.d0_hat;
  trace.full_retention = cfg.retain_full;
  const double d0_hat = cfg.d0_hat;
  DaCoefficients coef{
      [d0_hat](double, double gnorm) { return d0_hat / gnorm; },
      // beta_0 is taken equal to beta_1 = 1.
      [](std::int64_t k) { return k == 0 ? 1.0 : std::sqrt(static_cast<double>(k)); },
  };
  // rbar for WDA is pure bookkeeping: the running max of ||x_t - x0||.
  return run_dual_averaging(oracle, ctx, Q, cfg.x0, cfg.T, 0.0, coef, std::move(trace));
}

RunTrace run_dog_simplified(const FirstOrderOracle& oracle, const NormContext& ctx,
                            const FeasibleSet& Q, const DogConfig& cfg) {
  validate_common(oracle, ctx, Q, cfg.T, cfg.x0);
  if (!(cfg.rbar > 0.0) || !std::isfinite(cfg.rbar)) {
    throw std::invalid_argument("simplified-dog: rbar must be positive");
  }
  RunTrace trace;
  trace.solver = SolverKind::kSimplifiedDog;
  trace.rbar_init = cfg.rbar;
  trace.full_retention = cfg.retain_full;
  const auto start = std::chrono::steady_clock::now();
  Recorder rec(oracle, ctx, trace);
  Vector x = cfg.x0;
  double r = 0.0;
  double rbar = cfg.rbar;
  double sum_sq = 0.0;
  for (std::int64_t k = 0; k < cfg.T; ++k) {
    if (!rec.observe(k, x, kNaN, r, rbar)) break;
    if (rec.zero_gradient()) {
      rec.finish_zero_gradient();
      break;
    }
    sum_sq += rec.gnorm() * rec.gnorm();
    const double eta = rbar / std::sqrt(sum_sq);
    rec.set_weight(eta);
    x = project(Q, ctx, x - eta * ctx.apply_B_inverse(rec.g()));
    r = ctx.primal_norm(x - cfg.x0);
    rbar = std::max(rbar, r);
    if (!rec.accept_next(x, k, kNaN, r, rbar, k + 1 == cfg.T)) break;
  }
  trace.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return trace;
}

}  // namespace dada
