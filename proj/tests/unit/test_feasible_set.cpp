#include <doctest.h>

#include <cmath>
#include <random>

#include "dada/feasible_set.hpp"

using namespace dada;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

double objective(const NormContext& ctx, const Vector& s, double beta, const Vector& x0, const Vector& x) {
  const double r = ctx.primal_norm(x - x0);
  return s.dot(x) + 0.5 * beta * r * r;
}

// Derivative-free reference: cyclic coordinate minimization with golden-section
// line searches on [-width, width] around the current coordinate.
Vector coordinate_golden_section(const NormContext& ctx, const Vector& s, double beta,
                                 const Vector& x0, double width) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  Vector x = x0;
  for (int sweep = 0; sweep < 300; ++sweep) {
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      double lo = x[j] - width, hi = x[j] + width;
      auto at = [&](double t) {
        Vector y = x;
        y[j] = t;
        return objective(ctx, s, beta, x0, y);
      };
      for (int it = 0; it < 100; ++it) {
        const double m1 = hi - ratio * (hi - lo), m2 = lo + ratio * (hi - lo);
        if (at(m1) < at(m2)) hi = m2; else lo = m1;
      }
      x[j] = 0.5 * (lo + hi);
    }
  }
  return x;
}

Vector sample_in(const FeasibleSet& Q, const NormContext& ctx, std::mt19937_64& gen, Eigen::Index d) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector y(d);
  for (Eigen::Index i = 0; i < d; ++i) y[i] = 3.0 * u(gen);
  return project(Q, ctx, y);
}

}  // namespace

TEST_CASE("da_argmin examples") {
  const auto ctx = NormContext::identity(2);
  CHECK(da_argmin(WholeSpace{}, ctx, vec({2, 0}), 2.0, vec({0, 0})) == vec({-1, 0}));
  const Vector ball = da_argmin(EuclideanBall{Vector::Zero(2), 1.0}, ctx, vec({-4, 0}), 2.0, Vector::Zero(2));
  CHECK(ball[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ball[1] == 0.0);
  const Vector box = da_argmin(Box{vec({0, 0}), vec({1, 1})}, ctx, vec({-10, 1}), 2.0, vec({0, 0}));
  CHECK(box == vec({1, 0}));
}

TEST_CASE("contains examples") {
  const auto ctx1 = NormContext::identity(1);
  const auto ctx2 = NormContext::identity(2);
  CHECK(contains(WholeSpace{}, ctx2, vec({1e300, -1e300})));
  const EuclideanBall ball{Vector::Zero(2), 1.0};
  CHECK(contains(ball, ctx2, vec({1, 0})));
  CHECK_FALSE(contains(ball, ctx2, vec({1 + 1e-6, 0})));
  CHECK(contains(Box{vec({0}), vec({1})}, ctx1, vec({0.5})));
  CHECK_FALSE(contains(Box{vec({0}), vec({1})}, ctx1, vec({1.1})));
}

TEST_CASE("invalid descriptors and unsupported geometry") {
  const auto ctx = NormContext::identity(2);
  const auto dense = NormContext::dense((Matrix(2, 2) << 2, 1, 1, 2).finished());
  CHECK_THROWS_AS(validate(EuclideanBall{Vector::Zero(2), 0.0}, ctx), std::invalid_argument);
  CHECK_THROWS_AS(validate(Box{vec({1, 0}), vec({0, 1})}, ctx), std::invalid_argument);
  CHECK_THROWS_AS(validate(EuclideanBall{Vector::Zero(2), 1.0}, dense), UnsupportedGeometry);
  CHECK_THROWS_AS(da_argmin(Box{vec({0, 0}), vec({1, 1})}, dense, vec({1, 1}), 1.0, vec({0.5, 0.5})),
                  UnsupportedGeometry);
  CHECK_NOTHROW(da_argmin(WholeSpace{}, dense, vec({1, 1}), 1.0, vec({0.5, 0.5})));
  CHECK_THROWS_AS(da_argmin(Box{vec({0, 0}), vec({1, 1})}, ctx, vec({1, 1}), 1.0, vec({2, 0})),
                  std::invalid_argument);
  CHECK_THROWS_AS(da_argmin(WholeSpace{}, ctx, vec({1, 1}), 0.0, vec({0, 0})), std::invalid_argument);
}

TEST_CASE("variational inequality certificate at the returned point") {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> n01;
  const Eigen::Index d = 4;
  Vector diag(d);
  diag << 0.5, 2.0, 1.0, 4.0;
  const std::vector<NormContext> contexts{NormContext::identity(d), NormContext::diagonal(diag)};
  for (const auto& ctx : contexts) {
    const std::vector<FeasibleSet> sets{
        WholeSpace{}, EuclideanBall{Vector::Constant(d, 0.2), 1.5},
        Box{Vector::Constant(d, -1.0), Vector::Constant(d, 0.7)}};
    for (const FeasibleSet& Q : sets) {
      CAPTURE(set_kind(Q));
      for (int call = 0; call < 20; ++call) {
        Vector s(d);
        for (Eigen::Index i = 0; i < d; ++i) s[i] = 5.0 * n01(gen);
        const Vector x0 = sample_in(Q, ctx, gen, d);
        const double beta = 0.1 + std::abs(n01(gen));
        const Vector x = da_argmin(Q, ctx, s, beta, x0);
        CHECK(contains(Q, ctx, x));
        const Vector grad = s + beta * ctx.apply_B(x - x0);
        const double scale = ctx.dual_norm(s) + 1.0;
        for (int t = 0; t < 100; ++t) {
          const Vector y = sample_in(Q, ctx, gen, d);
          CHECK(grad.dot(y - x) >= -1e-8 * scale);
        }
      }
    }
  }
}

TEST_CASE("whole-space step agrees with a derivative-free minimizer") {
  const auto dense = NormContext::dense((Matrix(3, 3) << 3, 1, 0.5, 1, 2, 0.2, 0.5, 0.2, 1.5).finished());
  const std::vector<NormContext> contexts{NormContext::identity(3), NormContext::diagonal(vec({1, 3, 0.5})), dense};
  const Vector s = vec({1.5, -2.0, 0.7});
  const Vector x0 = vec({0.3, 0.1, -0.4});
  for (const auto& ctx : contexts) {
    const Vector closed = da_argmin(WholeSpace{}, ctx, s, 1.7, x0);
    const Vector numeric = coordinate_golden_section(ctx, s, 1.7, x0, 4.0);
    CHECK((closed - numeric).norm() <= 1e-6);
  }
}

TEST_CASE("large beta keeps the step at x0") {
  const auto ctx = NormContext::identity(3);
  const Vector s = vec({3, -4, 12});
  const Vector x0 = vec({0.5, 0.5, 0.5});
  for (const FeasibleSet& Q : std::vector<FeasibleSet>{
           WholeSpace{}, EuclideanBall{Vector::Zero(3), 1.0}, Box{Vector::Zero(3), Vector::Ones(3)}}) {
    CHECK((da_argmin(Q, ctx, s, 1e12, x0) - x0).norm() <= 1e-9 * s.norm());
  }
}
