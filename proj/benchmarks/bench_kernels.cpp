#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "arch/positivity.hpp"

using namespace arch;

namespace {

KernelEvaluator pair_evaluator() {
  return KernelEvaluator::from_archipelago(
      make_archipelago({{cplx(-1.0, 0.0), 1.0}, {cplx(1.0, 0.0), 1.0}}));
}

}  // namespace

static void KernelLRational(benchmark::State& state) {
  const auto ev = pair_evaluator();
  const PointQuad q{{4.1, 0.7}, {-3.9, 1.2}, {0.4, 4.4}, {5.0, -0.3}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel_L(ev, q));
  }
}
BENCHMARK(KernelLRational);

static void KernelLDividedDifference(benchmark::State& state) {
  const auto ev = pair_evaluator();
  const PointQuad q{{4.1, 0.7}, {-3.9, 1.2}, {0.4, 4.4}, {5.0, -0.3}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel_L_divided_difference(ev, q));
  }
}
BENCHMARK(KernelLDividedDifference);

static void GramAssemblyL(benchmark::State& state) {
  const auto ev = pair_evaluator();
  const auto [lo, hi] = default_band(ev.bounding_radius());
  const SamplePlan plan{static_cast<int>(state.range(0)), lo, hi, 1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(gram_psd(ev, KernelTag::L, plan));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(GramAssemblyL)->RangeMultiplier(2)->Range(8, 64)->Complexity();

static void OperatorResolventL(benchmark::State& state) {
  const auto ev = pair_evaluator();
  const auto outcome = run_chain_for(ev.node_polynomial(), ev.defining_kernel(),
                                     static_cast<int>(state.range(0)), 1e-10, 12.0);
  const auto op = assemble_truncated(*outcome.run, static_cast<int>(state.range(0)));
  const PointQuad q{{4.1, 0.7}, {-3.9, 1.2}, {0.4, 4.4}, {5.0, -0.3}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(operator_L(op, q));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(OperatorResolventL)->RangeMultiplier(2)->Range(8, 64)->Complexity();
