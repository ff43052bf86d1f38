#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "dada/feasible_set.hpp"
#include "dada/normed_space.hpp"
#include "dada/problems.hpp"

namespace dada {

enum class SolverKind { kDada, kWda, kSimplifiedDog };
enum class Termination { kBudget, kZeroGradient, kNumericFailure };

const char* to_string(SolverKind kind);
const char* to_string(Termination t);

inline constexpr double kDefaultC = 2.0 * std::numbers::sqrt2;

/// Dual averaging with distance adaptation:
///   a_k = rbar_k / ||g_k||_*,  beta_k = c sqrt(k + 1),  rbar_k = max{rbar, max_{t<=k} ||x_t - x0||}.
struct DadaConfig {
  double rbar = 1e-6;
  double c = kDefaultC;
  std::int64_t T = 1;
  Vector x0;
  /// Keep every iterate and subgradient (required by check_da_convergence_lemma).
  bool retain_full = false;
  /// Skips the c > sqrt(2) check. Only for negative-control tests.
  bool allow_invalid_c = false;
};

/// Weighted dual averaging: a_k = d0_hat / ||g_k||_*, beta_k = sqrt(k).
struct WdaConfig {
  double d0_hat = 1.0;
  std::int64_t T = 1;
  Vector x0;
  bool retain_full = false;
};

/// Projected (sub)gradient steps x_{k+1} = P_Q(x_k - eta_k B^{-1} g_k) with
/// eta_k = rbar_k / sqrt(sum_{i<=k} ||g_i||_*^2). A reconstruction for
/// comparison runs, not a port of any reference implementation.
struct DogConfig {
  double rbar = 1e-6;
  std::int64_t T = 1;
  Vector x0;
  bool retain_full = false;
};

/// One oracle query. `beta` is the regularization weight that produced x_k
/// (for k = 0 the solver's convention for beta_0); `a` is the weight of g_k
/// (the step size for simplified DoG, whose beta is NaN). v and D are set
/// when the oracle knows x*; at a zero subgradient v is recorded as 0.
struct TraceRow {
  std::int64_t k = 0;
  double f = 0.0;
  double best_f = 0.0;
  double gnorm = 0.0;
  double a = 0.0;
  double beta = 0.0;
  double r = 0.0;
  double rbar = 0.0;
  std::optional<double> v;
  std::optional<double> D;
};

/// The iterate produced after the last recorded row (x_K, K = rows.size()).
struct IterateTail {
  double beta = 0.0;
  double r = 0.0;
  double rbar = 0.0;
  std::optional<double> D;
};

struct RunTrace {
  SolverKind solver = SolverKind::kDada;
  double c = 0.0;          // DADA only
  double rbar_init = 0.0;  // DADA and DoG
  double d0_hat = 0.0;     // WDA only

  std::vector<TraceRow> rows;
  std::optional<IterateTail> tail;

  Vector best_point;
  double best_f = 0.0;
  std::int64_t best_index = 0;

  Termination termination = Termination::kBudget;
  std::string message;
  std::int64_t oracle_calls = 0;
  std::size_t v_clamped = 0;
  double wall_seconds = 0.0;

  bool full_retention = false;
  std::vector<Vector> iterates;     // x_0 .. x_K
  std::vector<Vector> subgradients;  // g_0 .. g_{K-1}

  bool has_solution_diagnostics() const { return !rows.empty() && rows.front().v.has_value(); }
  double d0() const;  // rows[0].D; throws std::logic_error without diagnostics
};

/// Throws std::invalid_argument for invalid configuration (including x0 not
/// in Q or dimension mismatches). Numeric failures end the run with a
/// partial trace and Termination::kNumericFailure.
RunTrace run_dada(const FirstOrderOracle& oracle, const NormContext& ctx, const FeasibleSet& Q,
                  const DadaConfig& cfg);
RunTrace run_wda(const FirstOrderOracle& oracle, const NormContext& ctx, const FeasibleSet& Q,
                 const WdaConfig& cfg);
RunTrace run_dog_simplified(const FirstOrderOracle& oracle, const NormContext& ctx,
                            const FeasibleSet& Q, const DogConfig& cfg);

/// 1e-6 (1 + ||x0||).
double default_rbar(const NormContext& ctx, const Vector& x0);

}  // namespace dada
