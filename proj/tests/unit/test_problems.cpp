#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "dada/problem_io.hpp"
#include "dada/problems.hpp"

using namespace dada;

namespace {

Vector random_point(std::mt19937_64& gen, Eigen::Index d, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vector x(d);
  for (Eigen::Index i = 0; i < d; ++i) x[i] = u(gen);
  return x;
}

void check_convexity(const FirstOrderOracle& oracle, std::mt19937_64& gen, double scale, int pairs) {
  for (int t = 0; t < pairs; ++t) {
    const Vector x = random_point(gen, oracle.dimension, scale);
    const Vector y = random_point(gen, oracle.dimension, scale);
    const Evaluation ex = oracle.evaluate(x);
    const double fy = oracle.evaluate(y).value;
    CHECK(fy >= ex.value + ex.subgradient.dot(y - x) - 1e-9 * (1 + std::abs(fy)));
  }
}

}  // namespace

TEST_CASE("softmax evaluation examples") {
  SoftmaxProblem two;
  two.A = (Matrix(2, 1) << 1, -1).finished();
  two.b = Vector::Zero(2);
  two.mu = 1.0;
  const Evaluation e = softmax_eval(two, Vector::Zero(1));
  CHECK(e.value == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(std::abs(e.subgradient[0]) <= 1e-16);

  SoftmaxProblem one;
  one.A = (Matrix(1, 3) << 0.5, -2, 1).finished();
  one.b = (Vector(1) << 0.25).finished();
  one.mu = 0.1;
  const Vector x = (Vector(3) << 1, 2, 3).finished();
  const Evaluation e1 = softmax_eval(one, x);
  CHECK(e1.value == doctest::Approx(one.A.row(0).dot(x) - 0.25).epsilon(1e-14));
  CHECK((e1.subgradient - one.A.row(0).transpose()).norm() == 0.0);
}

TEST_CASE("softmax overflow names the row") {
  SoftmaxProblem p;
  p.A = (Matrix(2, 1) << 1, 1e308).finished();
  p.b = Vector::Zero(2);
  p.mu = 1e-10;
  try {
    softmax_eval(p, (Vector(1) << 10).finished());
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("row 1") != std::string::npos);
  }
}

TEST_CASE("gen_softmax recentering and determinism") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const SoftmaxProblem p = gen_softmax(30, 12, 0.05, seed);
    const double scale = p.A.rowwise().norm().maxCoeff();
    CHECK(softmax_eval(p, Vector::Zero(12)).subgradient.norm() <= 1e-10 * scale);
    const SoftmaxProblem q = gen_softmax(30, 12, 0.05, seed);
    CHECK(p.A == q.A);
    CHECK(p.b == q.b);
  }
  const SoftmaxProblem single = gen_softmax(1, 4, 0.1, 9);
  CHECK(single.A.norm() == 0.0);
  CHECK(gen_softmax(5, 3, 0.1, 1).A != gen_softmax(5, 3, 0.1, 2).A);
  CHECK_THROWS_AS(gen_softmax(0, 3, 0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_softmax(3, 3, 0.0, 1), std::invalid_argument);
}

TEST_CASE("polyhedron evaluation examples") {
  PolyhedronProblem p;
  p.A = (Matrix(1, 1) << 1).finished();
  p.b = Vector::Zero(1);
  p.q = 2.0;
  const Evaluation e = polyhedron_eval(p, (Vector(1) << 3).finished());
  CHECK(e.value == 9.0);
  CHECK(e.subgradient[0] == 6.0);

  p.q = 1.0;
  const Evaluation inactive = polyhedron_eval(p, (Vector(1) << -2).finished());
  CHECK(inactive.value == 0.0);
  CHECK(inactive.subgradient[0] == 0.0);
  const Evaluation boundary = polyhedron_eval(p, (Vector(1) << 0).finished());
  CHECK(boundary.value == 0.0);
  CHECK(boundary.subgradient[0] == 0.0);
}

TEST_CASE("gen_polyhedron plants an exact solution") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (double q : {1.0, 1.5, 2.0}) {
      const PolyhedronProblem p = gen_polyhedron(40, 7, 10.0, q, seed);
      CHECK(p.planted_solution.norm() == doctest::Approx(9.5).epsilon(1e-12));
      const Evaluation e = polyhedron_eval(p, p.planted_solution);
      CHECK(e.value == 0.0);
      CHECK(e.subgradient.norm() == 0.0);
      const Vector ax = p.A * p.planted_solution;
      CHECK(ax.minCoeff() < 0.0);
      CHECK(ax[ax.size() - 1] < 0.0);
      CHECK(((p.b - ax).array() >= 0.0).all());
      CHECK(((p.b - ax).array() <= -0.1 * ax.minCoeff()).all());
    }
  }
  const PolyhedronProblem a = gen_polyhedron(10, 3, 2.0, 1.5, 42);
  const PolyhedronProblem b = gen_polyhedron(10, 3, 2.0, 1.5, 42);
  CHECK(a.A == b.A);
  CHECK(a.b == b.b);
  CHECK(a.planted_solution == b.planted_solution);
  CHECK_THROWS_AS(gen_polyhedron(1, 3, 1.0, 1.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_polyhedron(5, 3, 1.0, 2.5, 1), std::invalid_argument);
}

TEST_CASE("worst-case evaluation examples") {
  for (double p : {2.0, 3.0, 4.0, 2.5}) {
    const Evaluation e = worst_case_eval({6, p}, Vector::Ones(6));
    CHECK(e.value == doctest::Approx(1.0 / p).epsilon(1e-15));
    const Evaluation z = worst_case_eval({6, p}, Vector::Zero(6));
    CHECK(z.value == 0.0);
    CHECK(z.subgradient.norm() == 0.0);
  }
  const Evaluation e = worst_case_eval({1, 2.0}, (Vector(1) << 3).finished());
  CHECK(e.value == 4.5);
  CHECK(e.subgradient[0] == 3.0);
  // d = 2, p = 2: f = (x1 - x2)^2/2 + x2^2/2 at (2, -1): 4.5 + 0.5, grad (3, -3 - 1).
  const Evaluation two = worst_case_eval({2, 2.0}, (Vector(2) << 2, -1).finished());
  CHECK(two.value == doctest::Approx(5.0));
  CHECK(two.subgradient[0] == doctest::Approx(3.0));
  CHECK(two.subgradient[1] == doctest::Approx(-4.0));
}

TEST_CASE("finite-difference gradient checks") {
  std::mt19937_64 gen(11);
  const auto softmax = make_oracle(std::make_shared<const SoftmaxProblem>(gen_softmax(40, 15, 0.1, 3)));
  CHECK(fd_gradient_check(softmax, random_point(gen, 15, 1.0), 1e-6) <= 1e-5);
  const auto worst2 = make_oracle(WorstCaseProblem{10, 2.0});
  CHECK(fd_gradient_check(worst2, random_point(gen, 10, 1.0), 1e-6) <= 1e-5);
  const auto quad = make_quadratic_oracle(NormContext::identity(8));
  CHECK(fd_gradient_check(quad, random_point(gen, 8, 1.0), 1e-6) <= 1e-7);
  CHECK_THROWS_AS(fd_gradient_check(quad, Vector::Zero(8), 0.0), std::invalid_argument);
}

TEST_CASE("convexity witness on shipped problems") {
  std::mt19937_64 gen(5);
  check_convexity(make_oracle(std::make_shared<const SoftmaxProblem>(gen_softmax(30, 10, 0.05, 1))),
                  gen, 2.0, 500);
  for (double q : {1.0, 1.5, 2.0}) {
    check_convexity(make_oracle(std::make_shared<const PolyhedronProblem>(
                        gen_polyhedron(30, 10, 5.0, q, 2))),
                    gen, 8.0, 500);
  }
  for (double p : {2.0, 3.0, 4.0}) check_convexity(make_oracle(WorstCaseProblem{10, p}), gen, 2.0, 500);
  check_convexity(make_quadratic_oracle(NormContext::identity(10)), gen, 2.0, 500);
}

TEST_CASE("q = 1 boundary subgradient is valid") {
  PolyhedronProblem p;
  p.A = (Matrix(3, 2) << 1, 0, 0, 1, 1, 1).finished();
  p.b = (Vector(3) << 1, 1, 1).finished();
  p.q = 1.0;
  // (1, 0) sits on the boundary of rows 0 and 2 and strictly inside row 1.
  const Vector x = (Vector(2) << 1, 0).finished();
  const Evaluation e = polyhedron_eval(p, x);
  std::mt19937_64 gen(3);
  for (int t = 0; t < 500; ++t) {
    const Vector y = random_point(gen, 2, 3.0);
    CHECK(polyhedron_eval(p, y).value >= e.value + e.subgradient.dot(y - x) - 1e-15);
  }
}

TEST_CASE("polyhedron q = 2 gradient is Lipschitz with (2/n) sum ||a_i||^2") {
  const PolyhedronProblem p = gen_polyhedron(25, 6, 3.0, 2.0, 8);
  const double L = 2.0 / 25.0 * p.A.rowwise().squaredNorm().sum();
  std::mt19937_64 gen(1);
  for (int t = 0; t < 500; ++t) {
    const Vector x = random_point(gen, 6, 5.0);
    const Vector y = random_point(gen, 6, 5.0);
    const double dg = (polyhedron_eval(p, x).subgradient - polyhedron_eval(p, y).subgradient).norm();
    CHECK(dg <= L * (x - y).norm() * (1 + 1e-12));
  }
}

TEST_CASE("problem instances survive a JSON round trip bit-identically") {
  std::mt19937_64 gen(2);
  const auto ctx6 = NormContext::identity(6);
  const std::vector<ProblemInstance> instances{
      gen_softmax(9, 6, 0.01, 77), gen_polyhedron(9, 6, 4.0, 1.5, 78), WorstCaseProblem{6, 3.0},
      QuadraticProblem{6}};
  for (const ProblemInstance& inst : instances) {
    CAPTURE(problem_kind(inst));
    const std::string text = problem_to_json(inst).dump();
    const ProblemInstance back = problem_from_json(nlohmann::json::parse(text));
    CHECK(problem_kind(back) == problem_kind(inst));
    const auto o1 = make_oracle(inst, ctx6);
    const auto o2 = make_oracle(back, ctx6);
    for (int t = 0; t < 5; ++t) {
      const Vector x = random_point(gen, 6, 2.0);
      const Evaluation e1 = o1.evaluate(x), e2 = o2.evaluate(x);
      CHECK(e1.value == e2.value);
      CHECK(e1.subgradient == e2.subgradient);
    }
    CHECK(o1.known_solution.has_value() == o2.known_solution.has_value());
  }
}

TEST_CASE("malformed instance documents name the field") {
  auto doc = problem_to_json(gen_softmax(3, 2, 0.1, 1));
  doc["b"] = {1.0};
  try {
    problem_from_json(doc);
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("problem.b") != std::string::npos);
  }
  CHECK_THROWS_AS(problem_from_json(nlohmann::json{{"kind", "nope"}}), std::invalid_argument);
  CHECK_THROWS_AS(problem_from_json(nlohmann::json{{"kind", "worst-case"}, {"d", 3}, {"p", 1.5}}),
                  std::invalid_argument);
}
