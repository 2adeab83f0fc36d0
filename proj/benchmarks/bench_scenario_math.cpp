#include <benchmark/benchmark.h>

#include "rsd/dimensioning.hpp"

namespace {

using namespace rsd;

void BM_HOneFloor(benchmark::State& state) {
  const DesignDims d{11, 2000, state.range(0)};
  for (auto _ : state) benchmark::DoNotOptimize(h_one(d, Probability{0.0035}));
}
BENCHMARK(BM_HOneFloor)->Arg(63000)->Arg(1000000)->Unit(benchmark::kMicrosecond);

void BM_HOneContinuous(benchmark::State& state) {
  const DesignDims d{11, 2000, 63000};
  for (auto _ : state) benchmark::DoNotOptimize(h_one(d, Probability{0.0035}, ThresholdConvention::continuous));
}
BENCHMARK(BM_HOneContinuous)->Unit(benchmark::kMicrosecond);

void BM_BarBeta(benchmark::State& state) {
  const DesignDims d{11, 2000, 63000};
  const Levels lv = Levels::make(0.005, 0.0035);
  for (auto _ : state) benchmark::DoNotOptimize(bar_beta(d, lv));
}
BENCHMARK(BM_BarBeta)->Unit(benchmark::kMicrosecond);

void BM_NPlainExact(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(n_plain_exact(11, Probability{0.005}, Probability{1e-12}));
}
BENCHMARK(BM_NPlainExact)->Unit(benchmark::kMicrosecond);

void BM_DimensionRsd(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(dimension_rsd(11, Probability{0.005}, Probability{1e-12}));
}
BENCHMARK(BM_DimensionRsd)->Unit(benchmark::kMillisecond);

}  // namespace
