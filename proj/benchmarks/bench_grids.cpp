#include <benchmark/benchmark.h>

#include "arch/leveldeform.hpp"
#include "arch/spherical.hpp"

using namespace arch;

static void DensityFieldClassification(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(density_field(0.5, n, 2.6));
  }
  state.SetComplexityN(n);
}
BENCHMARK(DensityFieldClassification)->RangeMultiplier(2)->Range(256, 2048)->Complexity();

static void QuadratureIdentity(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(quadrature_identity_check(0.5, HarmonicTag::Z2, n));
  }
}
BENCHMARK(QuadratureIdentity)->Arg(512)->Arg(1024)->Arg(2000);

static void SphericalAreaOffCenter(benchmark::State& state) {
  const DiskSpec disk{cplx(1.0, 0.0), 1.4142135623730951};
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(spherical_area(disk, n));
  }
}
BENCHMARK(SphericalAreaOffCenter)->Arg(512)->Arg(1024);
