#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "rwa/experiments.hpp"
#include "rwa/kernels.hpp"

using namespace rwa;
using kernels::Execution;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

void BM_WeightedOverlaps(benchmark::State& state) {
  const Eigen::Index grid = state.range(1);
  const RMatrix states = RMatrix::Random(grid, 40);
  const RVector weights = RVector::Constant(grid, 1.0 / static_cast<double>(grid));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::weighted_overlaps(states, weights, mode(state)));
  label(state);
}

void BM_StepExponentials(benchmark::State& state) {
  const QuantumModel m = build_synthetic(24, std::vector<double>(23, 1.3), 5);
  std::vector<kernels::StepSpec> steps;
  for (int i = 0; i < state.range(1); ++i) steps.push_back({1.0, std::cos(0.1 * i), 0.01});
  for (auto _ : state) benchmark::DoNotOptimize(kernels::step_exponentials(m, steps, mode(state)));
  label(state);
}

void BM_ConvergenceSweep(benchmark::State& state) {
  const QuantumModel m = build_synthetic(6, {1.0, std::sqrt(2.0), std::sqrt(3.0), std::sqrt(5.0), 0.7}, 11);
  const auto u = sample_cosine(1.0, 256);
  SweepOptions opts;
  opts.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(convergence_sweep(m, u, {0, 1}, {10, 20, 40, 80, 160, 320}, opts));
  label(state);
}

}  // namespace

BENCHMARK(BM_WeightedOverlaps)->ArgsProduct({{0, 1}, {1000, 8000}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_StepExponentials)->ArgsProduct({{0, 1}, {64, 512}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ConvergenceSweep)->ArgsProduct({{0, 1}, {0}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
