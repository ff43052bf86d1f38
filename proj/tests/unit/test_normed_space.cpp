#include <doctest.h>

#include <cmath>
#include <random>

#include "dada/normed_space.hpp"

using dada::Matrix;
using dada::NormContext;
using dada::Vector;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

std::vector<NormContext> sample_contexts(std::mt19937_64& gen, Eigen::Index d) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector diag(d);
  for (Eigen::Index i = 0; i < d; ++i) diag[i] = 0.1 + 5.0 * std::abs(u(gen));
  Matrix M(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) M(i, j) = u(gen);
  Matrix B = M * M.transpose() + 0.5 * Matrix::Identity(d, d);
  return {NormContext::identity(d), NormContext::diagonal(diag), NormContext::dense(B)};
}

}  // namespace

TEST_CASE("primal norm examples") {
  CHECK(NormContext::identity(2).primal_norm(vec({3, 4})) == doctest::Approx(5.0).epsilon(1e-15));
  const auto diag = NormContext::diagonal(vec({4, 1}));
  CHECK(diag.primal_norm(vec({1, 1})) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
  CHECK(diag.primal_norm(Vector::Zero(2)) == 0.0);
  const auto dense = NormContext::dense((Matrix(2, 2) << 2, 1, 1, 2).finished());
  CHECK(dense.primal_norm(Vector::Zero(2)) == 0.0);
}

TEST_CASE("dual norm examples") {
  CHECK(NormContext::identity(2).dual_norm(vec({3, 4})) == doctest::Approx(5.0).epsilon(1e-15));
  const auto diag = NormContext::diagonal(vec({4, 1}));
  CHECK(diag.dual_norm(vec({1, 1})) == doctest::Approx(std::sqrt(1.25)).epsilon(1e-15));
  const Vector x = vec({0.3, -2.0});
  CHECK(diag.dual_norm(diag.apply_B(x)) == doctest::Approx(diag.primal_norm(x)).epsilon(1e-14));
}

TEST_CASE("apply_B_inverse examples") {
  CHECK(NormContext::identity(2).apply_B_inverse(vec({2, 0})) == vec({2, 0}));
  CHECK(NormContext::diagonal(vec({4, 1})).apply_B_inverse(vec({4, 3})) == vec({1, 3}));
  // [[2,1],[1,2]]^{-1} = (1/3)[[2,-1],[-1,2]] by Cramer's rule.
  const auto dense = NormContext::dense((Matrix(2, 2) << 2, 1, 1, 2).finished());
  const Vector x = dense.apply_B_inverse(vec({3, 3}));
  CHECK(x[0] == doctest::Approx((2.0 * 3 - 3) / 3.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx((-3.0 + 2 * 3) / 3.0).epsilon(1e-14));
}

TEST_CASE("construction rejects invalid B") {
  CHECK_THROWS_AS(NormContext::identity(0), std::invalid_argument);
  CHECK_THROWS_AS(NormContext::diagonal(vec({1, 0})), std::invalid_argument);
  CHECK_THROWS_AS(NormContext::diagonal(vec({1, -2})), std::invalid_argument);
  CHECK_THROWS_AS(NormContext::dense((Matrix(2, 2) << 1, 2, 0, 1).finished()), std::invalid_argument);
  CHECK_THROWS_AS(NormContext::dense((Matrix(2, 2) << 1, 2, 2, 1).finished()), std::invalid_argument);
  CHECK_THROWS_AS(NormContext::dense(Matrix(2, 3)), std::invalid_argument);
}

TEST_CASE("dimension mismatch is reported") {
  const auto ctx = NormContext::identity(3);
  CHECK_THROWS_AS(ctx.primal_norm(vec({1, 2})), dada::DimensionError);
  CHECK_THROWS_AS(ctx.dual_norm(vec({1, 2})), dada::DimensionError);
  CHECK_THROWS_AS(ctx.apply_B_inverse(vec({1, 2})), dada::DimensionError);
}

TEST_CASE("Cauchy-Schwarz, inverse and homogeneity properties") {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> n01;
  const Eigen::Index d = 6;
  for (const auto& ctx : sample_contexts(gen, d)) {
    CAPTURE(dada::to_string(ctx.kind()));
    for (int trial = 0; trial < 1000; ++trial) {
      Vector x(d), s(d);
      for (Eigen::Index i = 0; i < d; ++i) {
        x[i] = n01(gen);
        s[i] = n01(gen);
      }
      CHECK(std::abs(s.dot(x)) <= ctx.dual_norm(s) * ctx.primal_norm(x) * (1 + 1e-12));
      const Vector back = ctx.apply_B(ctx.apply_B_inverse(s));
      CHECK((back - s).norm() <= 1e-10 * s.norm());
      const double alpha = 10.0 * n01(gen);
      CHECK(ctx.primal_norm(alpha * x) ==
            doctest::Approx(std::abs(alpha) * ctx.primal_norm(x)).epsilon(1e-12));
      CHECK(ctx.dual_norm(ctx.apply_B(x)) == doctest::Approx(ctx.primal_norm(x)).epsilon(1e-12));
    }
  }
}
