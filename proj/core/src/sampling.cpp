#include "arch/sampling.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace arch {

namespace {

double frac(double x) { return x - std::floor(x); }

// Raw 32-bit draws mapped to [0,1); avoids distribution objects whose
// output is implementation-defined.
double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void validate(const SamplePlan& plan) {
  if (plan.n < 1) throw std::invalid_argument("SamplePlan: n must be >= 1");
  if (!(plan.r_hi >= plan.r_lo) || !(plan.r_lo > 0.0))
    throw std::invalid_argument("SamplePlan: need 0 < r_lo <= r_hi");
}

cplx point_at(const SamplePlan& plan, std::uint64_t index, int slot) {
  // Low-discrepancy base angles/radii, jittered from a per-index stream.
  static constexpr double kPhiConj = 0.6180339887498949;    // 1/phi
  static constexpr double kSqrt2m1 = 0.41421356237309503;   // sqrt(2)-1
  static constexpr double kSqrt3m1 = 0.7320508075688772;    // sqrt(3)-1
  static constexpr double kSqrt5m2 = 0.23606797749978969;   // sqrt(5)-2
  const double angle_base = slot == 0 ? kPhiConj : kSqrt3m1;
  const double radius_base = slot == 0 ? kSqrt2m1 : kSqrt5m2;

  std::mt19937_64 rng(plan.seed * 0x9e3779b97f4a7c15ULL + index * 0x100000001b3ULL +
                      static_cast<std::uint64_t>(slot));
  rng.discard(3);
  const double ja = unit_draw(rng), jr = unit_draw(rng);

  const double k = static_cast<double>(index) + 1.0;
  const double theta =
      2.0 * std::numbers::pi * frac(k * angle_base + 0.08 * (ja - 0.5));
  const double rad01 = frac(k * radius_base + 0.10 * (jr - 0.5));
  const double radius = plan.r_lo + (plan.r_hi - plan.r_lo) * rad01;
  return std::polar(radius, theta);
}

}  // namespace

std::vector<cplx> plan_points(const SamplePlan& plan) {
  validate(plan);
  std::vector<cplx> pts(static_cast<std::size_t>(plan.n));
  for (int k = 0; k < plan.n; ++k)
    pts[static_cast<std::size_t>(k)] = point_at(plan, static_cast<std::uint64_t>(k), 0);
  return pts;
}

std::vector<std::pair<cplx, cplx>> plan_pairs(const SamplePlan& plan) {
  validate(plan);
  std::vector<std::pair<cplx, cplx>> pts(static_cast<std::size_t>(plan.n));
  for (int k = 0; k < plan.n; ++k) {
    pts[static_cast<std::size_t>(k)] = {point_at(plan, static_cast<std::uint64_t>(k), 0),
                                        point_at(plan, static_cast<std::uint64_t>(k), 1)};
  }
  return pts;
}

std::string kernel_tag_name(KernelTag tag) {
  switch (tag) {
    case KernelTag::OneMinusE: return "1-E";
    case KernelTag::L: return "L";
    case KernelTag::N: return "N";
    case KernelTag::AntidiagonalL: return "L_antidiagonal";
  }
  return "?";
}

}  // namespace arch
