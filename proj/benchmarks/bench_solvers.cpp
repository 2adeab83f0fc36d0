#include <benchmark/benchmark.h>

#include <vector>

#include "rsd/rsd_engine.hpp"

namespace {

using namespace rsd;

std::vector<Vector> draw(const ScenarioProblem& p, std::int64_t n, std::uint64_t seed) {
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(n));
  const StreamFamily fam{seed, 1, StreamRole::design};
  for (std::int64_t i = 0; i < n; ++i) {
    auto rng = fam.stream(i);
    out.push_back(p.sample(rng));
  }
  return out;
}

void BM_TransportLp(benchmark::State& state) {
  const TransportNetworkProblem p;
  const auto samples = draw(p, state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(p.solve(samples));
}
BENCHMARK(BM_TransportLp)->Arg(1340)->Arg(9197)->Unit(benchmark::kMillisecond);

void BM_InputDesignMinimax(benchmark::State& state) {
  const InputDesignProblem p(InputDesignInstance::reference());
  const auto samples = draw(p, state.range(0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(p.solve(samples));
}
BENCHMARK(BM_InputDesignMinimax)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_TransportOracle(benchmark::State& state) {
  const TransportNetworkProblem p;
  const auto theta = p.solve(draw(p, 1340, 3)).solution;
  const OracleOptions opt{static_cast<int>(state.range(0)), false};
  for (auto _ : state) {
    benchmark::DoNotOptimize(rvo(theta, p, 62273, Probability{0.0035}, StreamFamily{4, 1, StreamRole::oracle}, opt));
  }
}
BENCHMARK(BM_TransportOracle)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
