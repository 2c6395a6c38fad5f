#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "arch/numcore.hpp"

namespace arch {

/// Deterministic sampling plan on the radial band [r_lo, r_hi]: golden-angle
/// low-discrepancy placement plus per-index seeded jitter. The k-th point is
/// a function of (seed, k) only, so a plan of larger n extends a smaller one.
struct SamplePlan {
  int n = 32;
  double r_lo = 2.0;
  double r_hi = 4.0;
  std::uint64_t seed = 1;
};

/// n single points in the band.
std::vector<cplx> plan_points(const SamplePlan& plan);

/// n (w, z) pairs in the band (independent streams for the two slots).
std::vector<std::pair<cplx, cplx>> plan_pairs(const SamplePlan& plan);

enum class KernelTag { OneMinusE, L, N, AntidiagonalL };
std::string kernel_tag_name(KernelTag tag);

/// Finite-section verdict for a sampled kernel Gram matrix. For the
/// conditionally-negative check of E, min_eig holds the maximum projected
/// quadratic form and psd means "<= tolerance" instead.
struct GramReport {
  std::string kernel;
  int n = 0;
  std::uint64_t seed = 0;
  double min_eig = 0.0;
  double tolerance = 0.0;
  bool psd = false;
};

}  // namespace arch
