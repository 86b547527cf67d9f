#include <benchmark/benchmark.h>

#include <random>

#include "specforge/evaluation.hpp"
#include "specforge/generators.hpp"

namespace {

using namespace specforge;

Dataset uniform_points(std::size_t rows, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::uniform_int_distribution<int> lab(0, 2);
  std::vector<double> x(rows * 2);
  std::vector<double> y(rows);
  for (double& v : x) v = u(rng);
  for (double& v : y) v = lab(rng);
  return Dataset(std::move(x), 2, std::move(y), TaskKind::Classification);
}

void BM_Evaluate(benchmark::State& state, bool parallel) {
  const Dataset gen = synth_spiral(1000, 3, 0.2, 7, SpiralShape::Open);
  const SpecSet set = gen_grid(gen, static_cast<int>(state.range(0)), TaskKind::Classification);
  const Dataset eval = uniform_points(50000, 1);
  const DatasetStats stats = merge_stats(compute_stats(gen), compute_stats(eval));
  for (auto _ : state) {
    const EvalReport r = parallel ? evaluate(set, eval, stats) : evaluate_serial(set, eval, stats);
    benchmark::DoNotOptimize(r.f1);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(eval.rows()));
}

void BM_GenGrid(benchmark::State& state, bool parallel) {
  const Dataset gen = uniform_points(200000, 2);
  const int beta = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const SpecSet set = parallel ? gen_grid(gen, beta, TaskKind::Classification)
                                 : gen_grid_serial(gen, beta, TaskKind::Classification);
    benchmark::DoNotOptimize(set.specs.size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(gen.rows()));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Evaluate, parallel, true)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Evaluate, serial, false)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_GenGrid, parallel, true)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_GenGrid, serial, false)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
