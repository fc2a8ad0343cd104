#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "noma/analytic.hpp"
#include "noma/experiments.hpp"
#include "noma/geometry.hpp"
#include "noma/quadrature.hpp"
#include "noma/simcore.hpp"

namespace {

using namespace noma;

void BM_EllAlpha4(benchmark::State& state) {
  const KernelEvaluator k(table_one_params());
  double x = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(k.ell(1, x));
    x = x < 50.0 ? x * 1.01 : 0.5;
  }
}
BENCHMARK(BM_EllAlpha4);

void BM_EllAdaptive(benchmark::State& state) {
  NetworkParams p = table_one_params();
  p.pathloss_exponent = 3.5;
  const KernelEvaluator k(p);
  double x = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(k.ell(1, x));
    x = x < 50.0 ? x * 1.01 : 0.5;
  }
}
BENCHMARK(BM_EllAdaptive);

void BM_OptimizeBeta(benchmark::State& state) {
  const CoverageModel model(table_one_params());
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.optimize_beta(1, Scheme::kCooperative));
  }
}
BENCHMARK(BM_OptimizeBeta)->Unit(benchmark::kMillisecond);

void BM_GridIndexBuild(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e4, 1e4);
  std::vector<Point> pts(static_cast<std::size_t>(state.range(0)));
  for (auto& p : pts) p = {u(rng), u(rng)};
  for (auto _ : state) {
    GridIndex index(pts);
    benchmark::DoNotOptimize(index.size());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GridIndexBuild)->Arg(2000)->Arg(100000);

void BM_GridIndexNearest(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1e4, 1e4);
  std::vector<Point> pts(static_cast<std::size_t>(state.range(0)));
  for (auto& p : pts) p = {u(rng), u(rng)};
  const GridIndex index(pts);
  for (auto _ : state) benchmark::DoNotOptimize(index.nearest({u(rng), u(rng)}));
}
BENCHMARK(BM_GridIndexNearest)->Arg(2000)->Arg(100000);

void BM_TableOneTrial(benchmark::State& state) {
  const NetworkParams p = table_one_preset(PicoPreset::kLow);
  const Window w = Window::for_intensity(p.total_intensity());
  const Scheme schemes[] = {Scheme::kNonCooperative, Scheme::kCooperative};
  std::uint64_t trial = 0;
  for (auto _ : state) {
    const CoverageTally t = run_trial(p, schemes, w, 1, trial++);
    benchmark::DoNotOptimize(t.total_tagged());
  }
}
BENCHMARK(BM_TableOneTrial)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
