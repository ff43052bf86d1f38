#pragma once

#include <optional>
#include <vector>

#include "dada/normed_space.hpp"
#include "dada/solvers.hpp"
#include "dada/theory.hpp"

namespace dada {

/// Largest relative violation (LHS - RHS) / max{1, |RHS|} of the generic dual
/// averaging inequality
///   sum_{i<k} a_i <g_i, x_i - x*> + beta_k/2 ||x_k - x*||^2
///       <= beta_k/2 ||x0 - x*||^2 + sum_{i<k} a_i^2 / (2 beta_i) ||g_i||_*^2
/// over k = 1..K. Holds for any coefficients, so it applies to DADA and WDA.
/// `beta0` defaults to the trace's recorded beta_0 and must lie in (0, beta_1].
/// Throws std::logic_error unless the trace was recorded with full retention.
double check_da_convergence_lemma(const RunTrace& trace, const Vector& x_star,
                                  const NormContext& ctx,
                                  std::optional<double> beta0 = std::nullopt);

/// Largest relative violation of the DADA-specific bound
///   sum_{i<k} rbar_i v_i + c sqrt(k+1)/2 D_k^2 <= c sqrt(k+1)/2 D_0^2 + sqrt(k)/c rbar_{k-1}^2
/// using the trace's recorded v and D columns. Throws std::logic_error for a
/// non-DADA trace or one recorded without a known solution.
double check_coefficient_placing(const RunTrace& trace);

struct DistanceBoundReport {
  double Dbar = 0.0;
  double rbar_violation = 0.0;  // max_k (rbar_k - Dbar) / Dbar
  double D_violation = 0.0;     // max_k (D_k - D0 - sqrt2/c Dbar) / (D0 + sqrt2/c Dbar)
  bool passed(double tol = 1e-10) const { return rbar_violation <= tol && D_violation <= tol; }
};

/// rbar_k <= Dbar and D_k <= D0 + sqrt2/c Dbar for every recorded iterate,
/// with Dbar = max{rbar, 2c D0 / (c - sqrt 2)}. For c <= sqrt 2 the second
/// term is not positive and Dbar falls back to rbar.
DistanceBoundReport check_r_upper_d(const RunTrace& trace);

/// RateConstants for a DADA trace with known solution.
RateConstants rate_constants_for(const RunTrace& trace);

/// Per-prefix margins envelope(T') - v*_{T'}. Throws std::logic_error when the
/// trace has no v column.
std::vector<double> rate_envelope(const RunTrace& trace, const RateConstants& rc);

struct OmegaUpperReport {
  double residual = 0.0;  // f(x*_T) - f*
  double bound = 0.0;     // omega_class(v*_T)
};

/// f(x*_T) - f* against the class growth majorant at v*_T. Requires the
/// trace's v column and a known optimum.
OmegaUpperReport check_omega_upper(const RunTrace& trace, double f_star, const ClassSpec& spec);

}  // namespace dada
