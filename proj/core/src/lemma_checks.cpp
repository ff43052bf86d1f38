#include "dada/lemma_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace dada {
namespace {

double relative_violation(double lhs, double rhs) {
  return (lhs - rhs) / std::max(1.0, std::abs(rhs));
}

void require_diagnostics(const RunTrace& trace, const char* what) {
  if (!trace.has_solution_diagnostics()) {
    throw std::logic_error(std::string(what) + ": trace has no v/D columns (x* unknown)");
  }
}

// beta and D for iterate k, which is either a recorded row or the tail.
struct IterateView {
  double beta;
  double rbar;
  std::optional<double> D;
};

IterateView iterate(const RunTrace& trace, std::size_t k) {
  if (k < trace.rows.size()) return {trace.rows[k].beta, trace.rows[k].rbar, trace.rows[k].D};
  if (k == trace.rows.size() && trace.tail) return {trace.tail->beta, trace.tail->rbar, trace.tail->D};
  throw std::out_of_range("iterate index beyond the trace");
}

// Number of iterates after x0 that exist in the trace.
std::size_t last_iterate(const RunTrace& trace) {
  return trace.tail ? trace.rows.size() : trace.rows.size() - 1;
}

}  // namespace

double check_da_convergence_lemma(const RunTrace& trace, const Vector& x_star,
                                  const NormContext& ctx, std::optional<double> beta0) {
  if (!trace.full_retention || trace.iterates.empty()) {
    throw std::logic_error(
        "check_da_convergence_lemma: trace lacks retained iterates; rerun with full retention");
  }
  if (trace.solver == SolverKind::kSimplifiedDog) {
    throw std::logic_error("check_da_convergence_lemma: not a dual averaging trace");
  }
  const std::size_t K = trace.iterates.size() - 1;
  if (K == 0) return -std::numeric_limits<double>::infinity();
  const double b0 = beta0.value_or(trace.rows.front().beta);
  if (!(b0 > 0.0 && b0 <= iterate(trace, 1).beta)) {
    throw std::invalid_argument("check_da_convergence_lemma: beta0 must lie in (0, beta_1]");
  }
  const double D0_sq = std::pow(ctx.primal_norm(trace.iterates[0] - x_star), 2);
  double linear = 0.0;   // sum a_i <g_i, x_i - x*>
  double squares = 0.0;  // sum a_i^2 / (2 beta_i) ||g_i||^2
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= K; ++k) {
    const std::size_t i = k - 1;
    const TraceRow& row = trace.rows[i];
    const double beta_i = i == 0 ? b0 : row.beta;
    linear += row.a * trace.subgradients[i].dot(trace.iterates[i] - x_star);
    squares += row.a * row.a / (2.0 * beta_i) * row.gnorm * row.gnorm;
    const double beta_k = iterate(trace, k).beta;
    const double Dk = ctx.primal_norm(trace.iterates[k] - x_star);
    const double lhs = linear + 0.5 * beta_k * Dk * Dk;
    const double rhs = 0.5 * beta_k * D0_sq + squares;
    worst = std::max(worst, relative_violation(lhs, rhs));
  }
  return worst;
}

double check_coefficient_placing(const RunTrace& trace) {
  if (trace.solver != SolverKind::kDada) {
    throw std::logic_error("check_coefficient_placing: the bound is specific to DADA coefficients");
  }
  require_diagnostics(trace, "check_coefficient_placing");
  const double c = trace.c;
  const double D0 = trace.d0();
  const std::size_t K = last_iterate(trace);
  double weighted = 0.0;  // sum rbar_i v_i
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= K; ++k) {
    const TraceRow& prev = trace.rows[k - 1];
    weighted += prev.rbar * prev.v.value_or(0.0);
    const IterateView it = iterate(trace, k);
    const double half_beta = 0.5 * c * std::sqrt(static_cast<double>(k) + 1.0);
    const double Dk = it.D.value();
    const double lhs = weighted + half_beta * Dk * Dk;
    const double rhs = half_beta * D0 * D0 + std::sqrt(static_cast<double>(k)) / c * prev.rbar * prev.rbar;
    worst = std::max(worst, relative_violation(lhs, rhs));
  }
  return worst;
}

DistanceBoundReport check_r_upper_d(const RunTrace& trace) {
  if (trace.solver != SolverKind::kDada) {
    throw std::logic_error("check_r_upper_d: the bound is specific to DADA coefficients");
  }
  require_diagnostics(trace, "check_r_upper_d");
  const double c = trace.c;
  const double D0 = trace.d0();
  DistanceBoundReport report;
  report.Dbar = trace.rbar_init;
  if (c > std::numbers::sqrt2) {
    report.Dbar = std::max(trace.rbar_init, 2.0 * c / (c - std::numbers::sqrt2) * D0);
  }
  const double D_bound = D0 + std::numbers::sqrt2 / c * report.Dbar;
  report.rbar_violation = -std::numeric_limits<double>::infinity();
  report.D_violation = -std::numeric_limits<double>::infinity();
  const std::size_t K = last_iterate(trace);
  for (std::size_t k = 0; k <= K; ++k) {
    const IterateView it = iterate(trace, k);
    report.rbar_violation = std::max(report.rbar_violation, (it.rbar - report.Dbar) / report.Dbar);
    report.D_violation = std::max(report.D_violation, (it.D.value() - D_bound) / D_bound);
  }
  return report;
}

RateConstants rate_constants_for(const RunTrace& trace) {
  if (trace.solver != SolverKind::kDada) {
    throw std::logic_error("rate_constants_for: only defined for DADA traces");
  }
  return RateConstants::from(trace.d0(), trace.rbar_init, trace.c);
}

std::vector<double> rate_envelope(const RunTrace& trace, const RateConstants& rc) {
  require_diagnostics(trace, "rate_envelope");
  std::vector<double> v;
  v.reserve(trace.rows.size());
  for (const TraceRow& row : trace.rows) v.push_back(row.v.value());
  return rate_envelope_margins(v, rc);
}

OmegaUpperReport check_omega_upper(const RunTrace& trace, double f_star, const ClassSpec& spec) {
  require_diagnostics(trace, "check_omega_upper");
  double v_best = std::numeric_limits<double>::infinity();
  for (const TraceRow& row : trace.rows) v_best = std::min(v_best, row.v.value());
  return {trace.best_f - f_star, growth_upper_bound(spec, std::max(0.0, v_best))};
}

}  // namespace dada
