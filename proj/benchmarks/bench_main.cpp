// Microbenchmarks for the hot paths: the closed-form uniform coefficient
// sums, the generic spec sums, the design optimizers, sample quantization,
// and the Monte Carlo channel loop.

#include <benchmark/benchmark.h>

#include <cstddef>
#include <vector>

#include "qrate/lloyd.hpp"
#include "qrate/mcsim.hpp"
#include "qrate/quantizer.hpp"
#include "qrate/rate.hpp"
#include "qrate/uniform_opt.hpp"

namespace {

void BM_GammaUniformClosedForm(benchmark::State& state) {
  const std::size_t K = std::size_t(state.range(0));
  const double step = qrate::optimal_step(K);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qrate::gamma_factor_uniform(K, step));
  }
}
BENCHMARK(BM_GammaUniformClosedForm)->RangeMultiplier(4)->Range(2, 2048);

void BM_GammaGenericSums(benchmark::State& state) {
  const std::size_t K = std::size_t(state.range(0));
  const qrate::QuantizerSpec spec = qrate::make_uniform(K, qrate::optimal_step(K));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qrate::gamma_factor(spec));
  }
}
BENCHMARK(BM_GammaGenericSums)->RangeMultiplier(4)->Range(2, 2048);

void BM_OptimalStep(benchmark::State& state) {
  const std::size_t K = std::size_t(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qrate::optimal_step(K));
  }
}
BENCHMARK(BM_OptimalStep)->RangeMultiplier(4)->Range(2, 2048);

void BM_LloydOptimize(benchmark::State& state) {
  const std::size_t K = std::size_t(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qrate::lloyd_optimize(K).mse);
  }
}
BENCHMARK(BM_LloydOptimize)->RangeMultiplier(4)->Range(2, 128);

void BM_Quantize(benchmark::State& state) {
  const std::size_t K = std::size_t(state.range(0));
  const qrate::QuantizerSpec spec = qrate::make_uniform(K, qrate::optimal_step(K));
  std::vector<double> inputs(4096);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    inputs[i] = -4.0 + 8.0 * double(i) / double(inputs.size() - 1);
  }
  for (auto _ : state) {
    double acc = 0.0;
    for (double v : inputs) acc += qrate::quantize(spec, v);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(inputs.size()));
}
BENCHMARK(BM_Quantize)->RangeMultiplier(4)->Range(2, 512);

void BM_McSimulate(benchmark::State& state) {
  const qrate::QuantizerSpec spec = qrate::make_uniform(8, qrate::optimal_step(8));
  qrate::mc::McConfig cfg;
  cfg.samples = std::uint64_t(state.range(0));
  cfg.batches = 16;  // divides every power-of-two sample count in the range
  cfg.seed = 1;
  cfg.max_threads = 1;
  const qrate::Channel ch{10.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(qrate::mc::simulate(spec, ch, cfg).gmi_bits.value);
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(cfg.samples));
}
BENCHMARK(BM_McSimulate)->RangeMultiplier(4)->Range(1 << 14, 1 << 20);

}  // namespace

BENCHMARK_MAIN();
