#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dada/normed_space.hpp"

namespace dada {

// ---------------------------------------------------------------------------
// Function classes. Every variant carries g_star = ||grad f(x*)||_* (zero for
// unconstrained problems). All constants must be nonnegative.
// ---------------------------------------------------------------------------

struct LipschitzClass {
  double L0 = 0.0;
};

struct LipschitzSmoothClass {
  double L1 = 0.0;
  double g_star = 0.0;
};

struct HolderSmoothClass {
  double nu = 0.0;  // in [0, 1]
  double H = 0.0;
  double g_star = 0.0;
};

/// Lipschitz p-th derivative. `derivative_norms[i]` is ||D^i f(x*)|| for
/// 2 <= i <= p; missing entries count as zero.
struct HighOrderClass {
  int p = 2;
  double Lp = 0.0;
  std::map<int, double> derivative_norms;
  double g_star = 0.0;
};

/// Quasi-self-concordant with parameter M; `hess_norm` is ||D^2 f(x*)||.
struct QscClass {
  double M = 0.0;
  double hess_norm = 0.0;
  double g_star = 0.0;
};

struct L0L1SmoothClass {
  double L0 = 0.0;
  double L1 = 0.0;
  double g_star = 0.0;
};

using ClassSpec = std::variant<LipschitzClass, LipschitzSmoothClass, HolderSmoothClass,
                               HighOrderClass, QscClass, L0L1SmoothClass>;

/// Throws std::invalid_argument on negative constants, nu outside [0,1] or p < 2.
void validate(const ClassSpec& spec);
std::string class_name(const ClassSpec& spec);

/// Constants of the DADA rate bound.
///   Dbar = max{rbar, 2c D0 / (c - sqrt 2)},  D = sqrt 2 (c D0 + Dbar / c).
struct RateConstants {
  double D0 = 0.0;
  double rbar = 0.0;
  double c = 0.0;
  double Dbar = 0.0;
  double D = 0.0;

  /// Requires D0 >= 0, rbar > 0 and c > sqrt 2.
  static RateConstants from(double D0, double rbar, double c);
  /// log(e * Dbar / rbar), the logarithmic factor shared by every bound.
  double log_factor() const;
};

/// Largest t with omega(t) <= eps guaranteed by the class lemma. Terms whose
/// constant is zero are dropped from the min; +infinity if all are dropped.
double delta_eps(const ClassSpec& spec, double eps);

/// Oracle calls sufficient for v_T^* <= delta:  e^2 D^2 / delta^2 * log^2(e Dbar / rbar).
double complexity_T_v(double delta, const RateConstants& rc);

/// Corollary bound T(eps) for the class, evaluated from its own closed form
/// (not through delta_eps). Returns 0 when every constant vanishes.
double complexity_T(const ClassSpec& spec, double eps, const RateConstants& rc);

/// Class majorant of the growth function omega(t) = max{f(x) - f*: ||x - x*|| <= t}.
double growth_upper_bound(const ClassSpec& spec, double t);

/// phi(t) = (e^t - t - 1) / t^2 with phi(0) = 1/2.
double phi(double t);
/// xi(t) = e^t - t - 1.
double xi(double t);

/// log_+(t) = 1 + log t.
double log_plus(double t);

/// Big-O summary for the class with g* = 0, written with
/// D0bar = max{rbar, ||x0 - x*||} and log_+; constant factors omitted.
double complexity_big_o(const ClassSpec& spec, double eps, double D0bar, double rbar);

struct SuboptimalityMeasure {
  double value = 0.0;
  bool clamped = false;  // a tiny negative round-off was clamped to zero
};

/// v(x) = <g, x - x*> / ||g||_*. Negative values within 1e-12 (relative to
/// max{1, ||x - x*||}) are clamped to zero. Throws std::domain_error when g = 0.
SuboptimalityMeasure v_measure(const Vector& g, const Vector& x, const Vector& x_star,
                               const NormContext& ctx);

struct SeqMinSumBound {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// min_{1<=k<=T} d_k / sum_{i<k} d_i  versus  (d_T/d_0)^{1/T} log(e d_T/d_0) / T.
/// Requires d.size() >= T + 1, T >= 1, and d positive and nondecreasing.
SeqMinSumBound seq_min_sum_bound(std::span<const double> d, int T);

struct BoundInductionResult {
  bool held = true;
  double bound = 0.0;
  double max_iterate = 0.0;
};

/// Samples a sequence with d_{k+1} in [0, max{d_k, R + gamma d_k}] and checks
/// d_k <= max{R / (1 - gamma), d0}. Half of the steps saturate the recurrence
/// exactly; the rest draw uniformly from the admissible interval.
BoundInductionResult bound_induction_trial(double d0, double R, double gamma, int steps,
                                           std::uint64_t seed);
bool bound_induction_check(double d0, double R, double gamma, int steps, std::uint64_t seed);

/// envelope(T') = e D / sqrt(T') * log(e Dbar / rbar) for T' = 1..v.size(),
/// returned as envelope(T') - min_{k < T'} v_k.
std::vector<double> rate_envelope_margins(std::span<const double> v, const RateConstants& rc);
double rate_envelope(int prefix, const RateConstants& rc);

}  // namespace dada
