#include <benchmark/benchmark.h>

#include "arch/chain.hpp"

using namespace arch;

static void ChainRunTangentPair(benchmark::State& state) {
  const auto arch = make_archipelago({{cplx(-1.0, 0.0), 1.0}, {cplx(1.0, 0.0), 1.0}});
  const auto [P, Q] = defining_data(arch);
  const auto seeded = sos_seed(P, Q);
  const int K = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(chain_run(*seeded.seed, K, 1e-10, 12.0));
  }
  state.SetComplexityN(K);
}
BENCHMARK(ChainRunTangentPair)->RangeMultiplier(2)->Range(4, 64)->Complexity();

static void SosSeedFourDisks(benchmark::State& state) {
  const auto arch = make_archipelago({{cplx(-3.0, 0.0), 1.0},
                                      {cplx(0.0, 0.0), 1.0},
                                      {cplx(3.0, 0.0), 1.0},
                                      {cplx(0.0, 3.0), 1.0}});
  const auto [P, Q] = defining_data(arch);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sos_seed(P, Q));
  }
}
BENCHMARK(SosSeedFourDisks);

static void ThresholdTable(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(two_disk_threshold_table(3));
  }
}
BENCHMARK(ThresholdTable);
