#include <benchmark/benchmark.h>

#include <memory>

#include "dada/problems.hpp"
#include "dada/solvers.hpp"

namespace {

using dada::Vector;

// Cost of T iterations on the softmax instance, dominated by the oracle.
void BM_DadaSoftmax(benchmark::State& state) {
  const auto oracle = dada::make_oracle(std::make_shared<const dada::SoftmaxProblem>(dada::gen_softmax(100, 200, 0.1, 1)));
  const auto ctx = dada::NormContext::identity(200);
  dada::DadaConfig cfg;
  cfg.x0 = Vector::Ones(200);
  cfg.rbar = dada::default_rbar(ctx, cfg.x0);
  cfg.T = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(dada::run_dada(oracle, ctx, dada::WholeSpace{}, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DadaSoftmax)->Arg(1000)->Unit(benchmark::kMillisecond);

// Per-iteration overhead of the solver loop on the cheapest oracle.
void BM_SolverOverhead(benchmark::State& state) {
  const auto ctx = dada::NormContext::identity(50);
  const auto oracle = dada::make_quadratic_oracle(ctx);
  const Vector x0 = Vector::Ones(50);
  for (auto _ : state) {
    switch (state.range(0)) {
      case 0: {
        dada::DadaConfig cfg;
        cfg.x0 = x0;
        cfg.rbar = dada::default_rbar(ctx, x0);
        cfg.T = 10000;
        benchmark::DoNotOptimize(dada::run_dada(oracle, ctx, dada::WholeSpace{}, cfg));
        break;
      }
      case 1: {
        dada::WdaConfig cfg;
        cfg.x0 = x0;
        cfg.d0_hat = 1e3;
        cfg.T = 10000;
        benchmark::DoNotOptimize(dada::run_wda(oracle, ctx, dada::WholeSpace{}, cfg));
        break;
      }
      default: {
        dada::DogConfig cfg;
        cfg.x0 = x0;
        cfg.rbar = dada::default_rbar(ctx, x0);
        cfg.T = 10000;
        benchmark::DoNotOptimize(dada::run_dog_simplified(oracle, ctx, dada::WholeSpace{}, cfg));
      }
    }
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_SolverOverhead)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace
