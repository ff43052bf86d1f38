#include <doctest.h>

#include <atomic>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "dada/lemma_checks.hpp"
#include "dada/problems.hpp"
#include "dada/solvers.hpp"

using namespace dada;

namespace {

Vector ones(Eigen::Index d) { return Vector::Ones(d); }

DadaConfig dada_config(const NormContext& ctx, const Vector& x0, std::int64_t T, bool retain = false) {
  DadaConfig cfg;
  cfg.x0 = x0;
  cfg.T = T;
  cfg.rbar = default_rbar(ctx, x0);
  cfg.retain_full = retain;
  return cfg;
}

void check_trace_invariants(const RunTrace& trace) {
  REQUIRE_FALSE(trace.rows.empty());
  double running = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < trace.rows.size(); ++k) {
    const TraceRow& row = trace.rows[k];
    CHECK(row.k == static_cast<std::int64_t>(k));
    running = std::min(running, row.f);
    CHECK(row.best_f == running);
    if (k == 0) {
      if (trace.solver != SolverKind::kWda) CHECK(row.rbar == trace.rbar_init);
      CHECK(row.r == 0.0);
      continue;
    }
    const TraceRow& prev = trace.rows[k - 1];
    CHECK(row.best_f <= prev.best_f);
    CHECK(row.rbar >= prev.rbar);
    CHECK(row.rbar == std::max(prev.rbar, row.r));
    if (trace.solver != SolverKind::kSimplifiedDog) CHECK(row.beta >= prev.beta);
  }
  CHECK(trace.best_f == running);
  CHECK(trace.oracle_calls == static_cast<std::int64_t>(trace.rows.size()));
}

std::shared_ptr<const SoftmaxProblem> small_softmax(std::uint64_t seed, double mu = 0.1) {
  return std::make_shared<const SoftmaxProblem>(gen_softmax(30, 20, mu, seed));
}

}  // namespace

TEST_CASE("dada on the quadratic keeps rbar below max{rbar, 4 D0}") {
  const auto ctx = NormContext::identity(50);
  const auto oracle = make_quadratic_oracle(ctx);
  const Vector x0 = ones(50);
  const auto trace = run_dada(oracle, ctx, WholeSpace{}, dada_config(ctx, x0, 2000));
  check_trace_invariants(trace);
  const double D0 = std::sqrt(50.0);
  const double cap = std::max(trace.rbar_init, 4 * D0) * (1 + 1e-10);
  for (const auto& row : trace.rows) CHECK(row.rbar <= cap);
  CHECK(trace.rows.front().beta == doctest::Approx(kDefaultC).epsilon(1e-15));
  CHECK(trace.rows[5].beta == doctest::Approx(kDefaultC * std::sqrt(6.0)).epsilon(1e-15));
  CHECK(check_r_upper_d(trace).passed());
  CHECK(trace.best_f < 1e-3 * oracle.evaluate(x0).value);
}

TEST_CASE("zero gradient at x0 ends the run at once") {
  const auto ctx = NormContext::identity(3);
  const auto oracle = make_quadratic_oracle(ctx);
  const Vector x0 = Vector::Zero(3);
  const auto dada = run_dada(oracle, ctx, WholeSpace{}, dada_config(ctx, x0, 100));
  CHECK(dada.termination == Termination::kZeroGradient);
  CHECK(dada.rows.size() == 1);
  CHECK(dada.best_f == 0.0);
  CHECK(dada.oracle_calls == 1);
  CHECK(*dada.rows[0].v == 0.0);

  WdaConfig wcfg;
  wcfg.x0 = x0;
  wcfg.T = 100;
  CHECK(run_wda(oracle, ctx, WholeSpace{}, wcfg).termination == Termination::kZeroGradient);
  DogConfig dcfg;
  dcfg.x0 = x0;
  dcfg.T = 100;
  const auto dog = run_dog_simplified(oracle, ctx, WholeSpace{}, dcfg);
  CHECK(dog.termination == Termination::kZeroGradient);
  CHECK(dog.oracle_calls == 1);
}

TEST_CASE("T = 1 makes one oracle call and returns x0") {
  const auto ctx = NormContext::identity(4);
  const auto oracle = make_quadratic_oracle(ctx);
  const Vector x0 = ones(4);
  const auto trace = run_dada(oracle, ctx, WholeSpace{}, dada_config(ctx, x0, 1, true));
  CHECK(trace.rows.size() == 1);
  CHECK(trace.oracle_calls == 1);
  CHECK(trace.best_f == 2.0);
  CHECK(trace.best_point == x0);
  CHECK(trace.termination == Termination::kBudget);
  REQUIRE(trace.tail.has_value());
  CHECK(trace.tail->beta == doctest::Approx(kDefaultC * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(trace.iterates.size() == 2);
  CHECK(check_da_convergence_lemma(trace, Vector::Zero(4), ctx) <= 1e-12);
  CHECK(check_coefficient_placing(trace) <= 1e-12);
}

TEST_CASE("well-tuned WDA beats DADA, badly tuned WDA loses") {
  const auto ctx = NormContext::identity(50);
  const auto oracle = make_quadratic_oracle(ctx);
  const Vector x0 = ones(50);
  const double D0 = x0.norm();
  DadaConfig dcfg = dada_config(ctx, x0, 10000);
  dcfg.rbar = 1e-6 * D0;
  const auto dada = run_dada(oracle, ctx, WholeSpace{}, dcfg);

  WdaConfig tuned;
  tuned.x0 = x0;
  tuned.T = 10000;
  tuned.d0_hat = D0;
  CHECK(run_wda(oracle, ctx, WholeSpace{}, tuned).best_f <= dada.best_f);

  WdaConfig off = tuned;
  off.d0_hat = 1e3 * D0;
  const auto wda = run_wda(oracle, ctx, WholeSpace{}, off);
  check_trace_invariants(wda);
  CHECK(run_dada(oracle, ctx, WholeSpace{}, dada_config(ctx, x0, 10000)).best_f <= wda.best_f);
}

TEST_CASE("wda beta schedule and bookkeeping") {
  const auto ctx = NormContext::diagonal((Vector(3) << 1, 2, 3).finished());
  const auto oracle = make_quadratic_oracle(ctx);
  WdaConfig cfg;
  cfg.x0 = ones(3);
  cfg.T = 50;
  cfg.d0_hat = 0.3;
  const auto trace = run_wda(oracle, ctx, WholeSpace{}, cfg);
  check_trace_invariants(trace);
  CHECK(trace.rows[0].beta == 1.0);
  CHECK(trace.rows[1].beta == 1.0);
  CHECK(trace.rows[9].beta == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(trace.rows[0].a == doctest::Approx(0.3 / trace.rows[0].gnorm).epsilon(1e-15));
}

TEST_CASE("simplified DoG decreases monotonically after burn-in") {
  const auto ctx = NormContext::identity(1);
  const auto oracle = make_quadratic_oracle(ctx);
  DogConfig cfg;
  cfg.x0 = ones(1);
  cfg.T = 2000;
  cfg.rbar = default_rbar(ctx, cfg.x0);
  const auto trace = run_dog_simplified(oracle, ctx, WholeSpace{}, cfg);
  check_trace_invariants(trace);
  CHECK(std::isnan(trace.rows[0].beta));
  for (std::size_t k = 200; k < trace.rows.size(); ++k) CHECK(trace.rows[k].f <= trace.rows[k - 1].f);
  CHECK(trace.best_f < 1e-6);
}

TEST_CASE("solvers respect the feasible set") {
  const auto ctx = NormContext::identity(5);
  const auto prob = small_softmax(3);
  auto oracle = make_oracle(std::make_shared<const SoftmaxProblem>(gen_softmax(30, 5, 0.1, 3)));
  const EuclideanBall ball{Vector::Constant(5, 0.5), 0.9};
  DadaConfig cfg = dada_config(ctx, Vector::Constant(5, 0.5), 300, true);
  const auto dada = run_dada(oracle, ctx, ball, cfg);
  for (const Vector& x : dada.iterates) CHECK(contains(ball, ctx, x));
  DogConfig dog_cfg;
  dog_cfg.x0 = cfg.x0;
  dog_cfg.T = 300;
  dog_cfg.retain_full = true;
  const Box box{Vector::Constant(5, 0.2), Vector::Constant(5, 1.0)};
  const auto dog = run_dog_simplified(oracle, ctx, box, dog_cfg);
  for (const Vector& x : dog.iterates) CHECK(contains(box, ctx, x));
}

TEST_CASE("da-convergence lemma holds for dada and wda") {
  const auto diag = NormContext::diagonal((Vector(20) << Vector::LinSpaced(20, 0.5, 3.0)).finished());
  const auto quad = make_quadratic_oracle(diag);
  const auto soft = small_softmax(11);
  const auto soft_oracle = make_oracle(soft);
  const auto id = NormContext::identity(20);

  const auto t1 = run_dada(quad, diag, WholeSpace{}, dada_config(diag, ones(20), 500, true));
  CHECK(check_da_convergence_lemma(t1, Vector::Zero(20), diag) <= 1e-8);
  CHECK(check_da_convergence_lemma(t1, Vector::Zero(20), diag, t1.rows[1].beta) <= 1e-8);
  CHECK(check_coefficient_placing(t1) <= 1e-8);

  const auto t2 = run_dada(soft_oracle, id, WholeSpace{}, dada_config(id, ones(20), 500, true));
  CHECK(check_da_convergence_lemma(t2, Vector::Zero(20), id) <= 1e-8);
  CHECK(check_coefficient_placing(t2) <= 1e-8);

  WdaConfig wcfg;
  wcfg.x0 = ones(20);
  wcfg.T = 500;
  wcfg.d0_hat = 7.0;
  wcfg.retain_full = true;
  const auto t3 = run_wda(soft_oracle, id, WholeSpace{}, wcfg);
  CHECK(check_da_convergence_lemma(t3, Vector::Zero(20), id) <= 1e-8);
  CHECK_THROWS_AS(check_coefficient_placing(t3), std::logic_error);
  CHECK_THROWS_AS(check_da_convergence_lemma(t3, Vector::Zero(20), id, 2.0), std::invalid_argument);

  const auto plain = run_dada(quad, diag, WholeSpace{}, dada_config(diag, ones(20), 10));
  CHECK_THROWS_AS(check_da_convergence_lemma(plain, Vector::Zero(20), diag), std::logic_error);
}

TEST_CASE("coefficient placing on the worst-case p = 4 instance") {
  const auto ctx = NormContext::identity(30);
  const auto oracle = make_oracle(WorstCaseProblem{30, 4.0});
  const auto trace = run_dada(oracle, ctx, WholeSpace{}, dada_config(ctx, ones(30), 1000));
  check_trace_invariants(trace);
  CHECK(check_coefficient_placing(trace) <= 1e-8);
  CHECK(check_r_upper_d(trace).passed());
}

TEST_CASE("rate envelope holds on every prefix") {
  const auto ctx = NormContext::identity(10);
  for (const auto& oracle : {make_quadratic_oracle(ctx), make_oracle(WorstCaseProblem{10, 3.0})}) {
    const auto trace = run_dada(oracle, ctx, WholeSpace{}, dada_config(ctx, ones(10), 1000));
    const auto rc = rate_constants_for(trace);
    const auto margins = rate_envelope(trace, rc);
    REQUIRE(margins.size() == trace.rows.size());
    for (std::size_t k = 0; k < margins.size(); ++k) {
      CHECK(margins[k] >= -1e-10 * dada::rate_envelope(static_cast<int>(k + 1), rc));
    }
  }
}

TEST_CASE("omega-upper on the quadratic") {
  const auto ctx = NormContext::identity(8);
  const auto oracle = make_quadratic_oracle(ctx);
  for (std::int64_t T : {1, 10, 100, 1000}) {
    const auto trace = run_dada(oracle, ctx, WholeSpace{}, dada_config(ctx, ones(8), T));
    const auto report = check_omega_upper(trace, 0.0, *oracle.class_info);
    CHECK(report.residual <= report.bound * (1 + 1e-12));
  }
}

TEST_CASE("runs are deterministic") {
  const auto ctx = NormContext::identity(20);
  const auto a = run_dada(make_oracle(small_softmax(5)), ctx, WholeSpace{}, dada_config(ctx, ones(20), 300));
  const auto b = run_dada(make_oracle(small_softmax(5)), ctx, WholeSpace{}, dada_config(ctx, ones(20), 300));
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    CHECK(a.rows[k].f == b.rows[k].f);
    CHECK(a.rows[k].a == b.rows[k].a);
    CHECK(a.rows[k].r == b.rows[k].r);
  }
  CHECK(a.best_point == b.best_point);
}

TEST_CASE("numeric failure keeps the partial trace") {
  const auto ctx = NormContext::identity(2);
  auto oracle = make_quadratic_oracle(ctx);
  auto calls = std::make_shared<std::atomic<int>>(0);
  const auto inner = oracle.evaluate;
  oracle.evaluate = [inner, calls](const Vector& x) {
    Evaluation ev = inner(x);
    if (++*calls == 6) ev.value = std::numeric_limits<double>::quiet_NaN();
    return ev;
  };
  const auto trace = run_dada(oracle, ctx, WholeSpace{}, dada_config(ctx, ones(2), 50));
  CHECK(trace.termination == Termination::kNumericFailure);
  CHECK(trace.rows.size() == 5);
  CHECK_FALSE(trace.message.empty());

  auto throwing = make_quadratic_oracle(ctx);
  throwing.evaluate = [](const Vector&) -> Evaluation { throw NumericError("overflow in row 3"); };
  const auto t2 = run_dada(throwing, ctx, WholeSpace{}, dada_config(ctx, ones(2), 5));
  CHECK(t2.termination == Termination::kNumericFailure);
  CHECK(t2.rows.empty());
  CHECK(t2.message.find("row 3") != std::string::npos);
}

TEST_CASE("invalid configurations") {
  const auto ctx = NormContext::identity(2);
  const auto oracle = make_quadratic_oracle(ctx);
  DadaConfig cfg = dada_config(ctx, ones(2), 10);
  cfg.c = std::numbers::sqrt2;
  CHECK_THROWS_AS(run_dada(oracle, ctx, WholeSpace{}, cfg), std::invalid_argument);
  cfg.allow_invalid_c = true;
  CHECK_NOTHROW(run_dada(oracle, ctx, WholeSpace{}, cfg));
  cfg = dada_config(ctx, ones(2), 0);
  CHECK_THROWS_AS(run_dada(oracle, ctx, WholeSpace{}, cfg), std::invalid_argument);
  cfg = dada_config(ctx, ones(2), 10);
  cfg.rbar = 0.0;
  CHECK_THROWS_AS(run_dada(oracle, ctx, WholeSpace{}, cfg), std::invalid_argument);
  cfg = dada_config(ctx, ones(2), 10);
  CHECK_THROWS_AS(run_dada(oracle, ctx, EuclideanBall{Vector::Zero(2), 1.0}, cfg), std::invalid_argument);
  cfg.x0 = ones(3);
  CHECK_THROWS(run_dada(oracle, ctx, WholeSpace{}, cfg));
  WdaConfig wcfg;
  wcfg.x0 = ones(2);
  wcfg.d0_hat = -1.0;
  CHECK_THROWS_AS(run_wda(oracle, ctx, WholeSpace{}, wcfg), std::invalid_argument);
}
