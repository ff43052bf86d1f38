#include <benchmark/benchmark.h>

#include <memory>

#include "dada/feasible_set.hpp"
#include "dada/problems.hpp"
#include "dada/rng.hpp"

namespace {

using dada::Vector;

void BM_SoftmaxEval(benchmark::State& state) {
  const auto n = state.range(0);
  const auto prob = dada::gen_softmax(n, 2 * n, 0.1, 1);
  dada::Rng rng(2);
  const Vector x = rng.uniform_vector(2 * n, -1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(dada::softmax_eval(prob, x));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SoftmaxEval)->Arg(100)->Arg(1000);

void BM_PolyhedronEval(benchmark::State& state) {
  const auto prob = dada::gen_polyhedron(100, 50, 10.0, static_cast<double>(state.range(0)) / 2.0, 1);
  dada::Rng rng(3);
  const Vector x = rng.uniform_vector(50, -1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(dada::polyhedron_eval(prob, x));
}
BENCHMARK(BM_PolyhedronEval)->Arg(2)->Arg(3)->Arg(4);

void BM_WorstCaseEval(benchmark::State& state) {
  const dada::WorstCaseProblem prob{state.range(0), 3.0};
  const Vector x = Vector::Ones(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dada::worst_case_eval(prob, x));
}
BENCHMARK(BM_WorstCaseEval)->Arg(100)->Arg(10000);

void BM_DaArgmin(benchmark::State& state) {
  const auto d = state.range(0);
  const auto ctx = dada::NormContext::diagonal(Vector::LinSpaced(d, 1.0, 2.0));
  const dada::FeasibleSet box = dada::Box{Vector::Constant(d, -1.0), Vector::Constant(d, 1.0)};
  dada::Rng rng(4);
  const Vector s = rng.uniform_vector(d, -5.0, 5.0);
  const Vector x0 = Vector::Zero(d);
  for (auto _ : state) benchmark::DoNotOptimize(dada::da_argmin(box, ctx, s, 3.0, x0));
}
BENCHMARK(BM_DaArgmin)->Arg(50)->Arg(1000);

}  // namespace
