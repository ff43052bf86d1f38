#include "dada/problems.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dada/rng.hpp"

namespace dada {
namespace {

void check_point(const Vector& x, Eigen::Index d, const char* what) {
  if (x.size() != d) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (got " << x.size() << ", expected " << d << ")";
    throw DimensionError(msg.str());
  }
}

double signed_power(double t, double e) {
  if (t == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(t), e), t);
}

}  // namespace

FirstOrderOracle make_quadratic_oracle(const NormContext& ctx) {
  FirstOrderOracle oracle;
  oracle.name = "quadratic";
  oracle.dimension = ctx.dimension();
  oracle.evaluate = [ctx](const Vector& x) {
    Vector g = ctx.apply_B(x);
    return Evaluation{0.5 * x.dot(g), std::move(g)};
  };
  oracle.known_solution = Vector::Zero(ctx.dimension());
  oracle.known_optimum = 0.0;
  oracle.class_info = LipschitzSmoothClass{1.0, 0.0};
  return oracle;
}

Evaluation softmax_eval(const SoftmaxProblem& prob, const Vector& x) {
  check_point(x, prob.A.cols(), "softmax_eval");
  const Vector z = (prob.A * x - prob.b) / prob.mu;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (!std::isfinite(z[i])) {
      std::ostringstream msg;
      msg << "softmax_eval: non-finite scaled residual in row " << i;
      throw NumericError(msg.str());
    }
  }
  const double shift = z.maxCoeff();
  const Vector w = (z.array() - shift).exp().matrix();
  const double total = w.sum();
  const Vector pi = w / total;
  return Evaluation{prob.mu * (shift + std::log(total)), prob.A.transpose() * pi};
}

SoftmaxProblem gen_softmax(Eigen::Index n, Eigen::Index d, double mu, std::uint64_t seed) {
  if (n < 1 || d < 1) throw std::invalid_argument("gen_softmax: n and d must be >= 1");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("gen_softmax: mu must be positive");
  Rng rng(seed);
  SoftmaxProblem prob;
  prob.A.resize(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) prob.A(i, j) = rng.uniform(-1.0, 1.0);
  }
  prob.b = rng.uniform_vector(n, -1.0, 1.0);
  prob.mu = mu;
  const Vector g0 = softmax_eval(prob, Vector::Zero(d)).subgradient;
  prob.A.rowwise() -= g0.transpose();
  prob.recentered = true;
  prob.seed = seed;
  return prob;
}

Evaluation polyhedron_eval(const PolyhedronProblem& prob, const Vector& x) {
  check_point(x, prob.A.cols(), "polyhedron_eval");
  const Eigen::Index n = prob.A.rows();
  const Vector residual = prob.A * x - prob.b;
  Vector weights = Vector::Zero(n);
  double value = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = residual[i];
    if (r > 0.0) {
      value += std::pow(r, prob.q);
      weights[i] = prob.q == 1.0 ? 1.0 : prob.q * std::pow(r, prob.q - 1.0);
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  return Evaluation{value * inv_n, prob.A.transpose() * weights * inv_n};
}

PolyhedronProblem gen_polyhedron(Eigen::Index n, Eigen::Index d, double R, double q,
                                 std::uint64_t seed) {
  if (n < 2 || d < 1) throw std::invalid_argument("gen_polyhedron: need n >= 2 and d >= 1");
  if (!(R > 0.0) || !std::isfinite(R)) throw std::invalid_argument("gen_polyhedron: R must be positive");
  if (!(q >= 1.0 && q <= 2.0)) throw std::invalid_argument("gen_polyhedron: q must lie in [1, 2]");
  Rng rng(seed);
  PolyhedronProblem prob;
  prob.planted_solution = rng.on_sphere(d, 0.95 * R);
  prob.A.resize(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) prob.A(i, j) = rng.uniform(-1.0, 1.0);
  }
  if (prob.A.row(n - 1).dot(prob.planted_solution) >= 0.0) prob.A.row(n - 1) *= -1.0;
  // Same product as polyhedron_eval so that the residual at x* is exactly -s_i.
  const Vector ax = prob.A * prob.planted_solution;
  const double c_min = ax.minCoeff();
  if (!(c_min < 0.0)) throw std::runtime_error("gen_polyhedron: c_min >= 0, cannot plant a solution");
  prob.b.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) prob.b[i] = ax[i] + rng.uniform(0.0, -0.1 * c_min);
  prob.q = q;
  prob.R = R;
  prob.seed = seed;
  return prob;
}

Evaluation worst_case_eval(const WorstCaseProblem& prob, const Vector& x) {
  check_point(x, prob.d, "worst_case_eval");
  const Eigen::Index d = prob.d;
  const double p = prob.p;
  Vector g = Vector::Zero(d);
  double value = 0.0;
  for (Eigen::Index i = 0; i + 1 < d; ++i) {
    const double delta = x[i] - x[i + 1];
    value += std::pow(std::abs(delta), p);
    const double slope = signed_power(delta, p - 1.0);
    g[i] += slope;
    g[i + 1] -= slope;
  }
  value += std::pow(std::abs(x[d - 1]), p);
  g[d - 1] += signed_power(x[d - 1], p - 1.0);
  return Evaluation{value / p, std::move(g)};
}

FirstOrderOracle make_oracle(std::shared_ptr<const SoftmaxProblem> prob) {
  FirstOrderOracle oracle;
  oracle.name = "softmax";
  oracle.dimension = prob->A.cols();
  if (prob->recentered) {
    oracle.known_solution = Vector::Zero(oracle.dimension);
    oracle.known_optimum = softmax_eval(*prob, *oracle.known_solution).value;
  }
  // grad^2 f <= (1/mu) max_i ||a_i||^2 in the Euclidean norm.
  oracle.class_info = LipschitzSmoothClass{prob->A.rowwise().squaredNorm().maxCoeff() / prob->mu, 0.0};
  oracle.evaluate = [prob](const Vector& x) { return softmax_eval(*prob, x); };
  return oracle;
}

FirstOrderOracle make_oracle(std::shared_ptr<const PolyhedronProblem> prob) {
  FirstOrderOracle oracle;
  oracle.name = "polyhedron";
  oracle.dimension = prob->A.cols();
  if (prob->planted_solution.size() == oracle.dimension) {
    oracle.known_solution = prob->planted_solution;
    oracle.known_optimum = 0.0;
  }
  oracle.evaluate = [prob](const Vector& x) { return polyhedron_eval(*prob, x); };
  return oracle;
}

FirstOrderOracle make_oracle(WorstCaseProblem prob) {
  if (prob.d < 1) throw std::invalid_argument("worst-case: d must be >= 1");
  if (!(prob.p >= 2.0)) throw std::invalid_argument("worst-case: p must be >= 2");
  FirstOrderOracle oracle;
  oracle.name = "worst-case";
  oracle.dimension = prob.d;
  oracle.known_solution = Vector::Zero(prob.d);
  oracle.known_optimum = 0.0;
  oracle.evaluate = [prob](const Vector& x) { return worst_case_eval(prob, x); };
  return oracle;
}

double fd_gradient_check(const FirstOrderOracle& oracle, const Vector& x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("fd_gradient_check: h must be positive");
  const Vector g = oracle.evaluate(x).subgradient;
  double worst = 0.0;
  Vector probe = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    probe[j] = x[j] + h;
    const double up = oracle.evaluate(probe).value;
    probe[j] = x[j] - h;
    const double down = oracle.evaluate(probe).value;
    probe[j] = x[j];
    const double fd = (up - down) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - g[j]) / std::max(1.0, std::abs(g[j])));
  }
  return worst;
}

}  // namespace dada
