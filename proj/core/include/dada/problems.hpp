#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "dada/normed_space.hpp"
#include "dada/theory.hpp"

namespace dada {

/// Raised when an oracle produces a non-finite intermediate.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Evaluation {
  double value = 0.0;
  Vector subgradient;
};

/// f(x) together with one element of the subdifferential, plus whatever is
/// known about the problem. `evaluate` must be safe to call concurrently.
struct FirstOrderOracle {
  std::string name;
  Eigen::Index dimension = 0;
  std::function<Evaluation(const Vector&)> evaluate;
  std::optional<Vector> known_solution;
  std::optional<double> known_optimum;
  std::optional<ClassSpec> class_info;
};

// ---------------------------------------------------------------------------
// Quadratic: f(x) = 1/2 ||x||^2 in the norm of `ctx`, x* = 0, f* = 0, L1 = 1.
// ---------------------------------------------------------------------------

struct QuadraticProblem {
  Eigen::Index d = 1;
};

FirstOrderOracle make_quadratic_oracle(const NormContext& ctx);

// ---------------------------------------------------------------------------
// Softmax: f(x) = mu log sum_i exp[(<a_i, x> - b_i) / mu].
// ---------------------------------------------------------------------------

struct SoftmaxProblem {
  Matrix A;  // n x d, row i is a_i
  Vector b;
  double mu = 1.0;
  /// Set by gen_softmax: rows were shifted so that grad f(0) = 0.
  bool recentered = false;
  std::optional<std::uint64_t> seed;
};

/// Log-sum-exp with max subtraction. Throws NumericError naming the first row
/// whose scaled residual is not finite.
Evaluation softmax_eval(const SoftmaxProblem& prob, const Vector& x);

/// Draw order: A row by row (n*d uniforms on [-1, 1]), then b (n uniforms).
/// Each row is then shifted by -grad f_hat(0), which makes x* = 0 optimal.
SoftmaxProblem gen_softmax(Eigen::Index n, Eigen::Index d, double mu, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Polyhedron feasibility: f(x) = (1/n) sum_i [<a_i, x> - b_i]_+^q, q in [1, 2].
// ---------------------------------------------------------------------------

struct PolyhedronProblem {
  Matrix A;  // n x d
  Vector b;
  double q = 2.0;
  Vector planted_solution;
  double R = 0.0;
  std::optional<std::uint64_t> seed;
};

/// For q = 1 the subgradient takes the zero element of [0, 1] * a_i on active
/// boundaries (residual exactly zero).
Evaluation polyhedron_eval(const PolyhedronProblem& prob, const Vector& x);

/// Draw order: planted point (d normals, normalized to radius 0.95 R), A row
/// by row (n*d uniforms on [-1, 1]), then slacks s_i uniform on [0, -0.1 c_min].
/// The sign of the last row is flipped if needed so that <a_n, x*> < 0.
/// Throws std::runtime_error if c_min >= 0 after the flip.
PolyhedronProblem gen_polyhedron(Eigen::Index n, Eigen::Index d, double R, double q,
                                 std::uint64_t seed);

// ---------------------------------------------------------------------------
// Worst-case function:
//   f(x) = (1/p) sum_{i<d} |x_i - x_{i+1}|^p + (1/p) |x_d|^p,  x* = 0.
// ---------------------------------------------------------------------------

struct WorstCaseProblem {
  Eigen::Index d = 1;
  double p = 2.0;
};

Evaluation worst_case_eval(const WorstCaseProblem& prob, const Vector& x);

FirstOrderOracle make_oracle(std::shared_ptr<const SoftmaxProblem> prob);
FirstOrderOracle make_oracle(std::shared_ptr<const PolyhedronProblem> prob);
FirstOrderOracle make_oracle(WorstCaseProblem prob);

/// Max over coordinates of |fd_j - g_j| / max(1, |g_j|) where fd_j is the
/// central difference with step h.
double fd_gradient_check(const FirstOrderOracle& oracle, const Vector& x, double h);

}  // namespace dada
