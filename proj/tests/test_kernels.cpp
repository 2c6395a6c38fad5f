#include <doctest.h>

#include <numbers>
#include <random>

#include "arch/kernels.hpp"

using namespace arch;

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

cplx random_point(std::mt19937_64& rng, double lo, double hi) {
  const double r = lo + (hi - lo) * unit(rng);
  return std::polar(r, 2.0 * std::numbers::pi * unit(rng));
}

KernelEvaluator unit_disk_evaluator() {
  return KernelEvaluator::from_archipelago(make_archipelago({{cplx(0.0, 0.0), 1.0}}));
}

// Finite-difference oracle for -E d/dw[(dE/dzbar)/E], independent of the
// symbolic per-factor derivatives in the implementation.
cplx antidiagonal_fd_oracle(const KernelEvaluator& ev, cplx w, cplx z, double h) {
  const auto ratio = [&](cplx ww) { return ev.eval_dzbar(ww, z) / ev.eval(ww, z); };
  const cplx d = (ratio(w + h) - ratio(w - h)) / (2.0 * h);
  return -ev.eval(w, z) * d;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("exponential transform closed forms") {
  const auto ev = unit_disk_evaluator();
  CHECK(std::abs(exp_transform(ev, {2.0, 0.0}, {2.0, 0.0}) - cplx(0.75)) <= 1e-15);
  CHECK(std::abs(exp_transform(ev, {2.0, 0.0}, {3.0, 0.0}) - cplx(5.0 / 6.0)) <= 1e-15);

  const auto two = KernelEvaluator::from_archipelago(
      make_archipelago({{cplx(-1.0, 0.0), 1.0}, {cplx(1.0, 0.0), 1.0}}));
  CHECK(std::abs(exp_transform(two, {3.0, 0.0}, {3.0, 0.0}) - cplx(0.703125)) <= 1e-15);
}

TEST_CASE("guard region is enforced") {
  const auto ev = unit_disk_evaluator();
  CHECK_THROWS_AS(exp_transform(ev, {1.0, 0.0}, {2.0, 0.0}), std::domain_error);
  CHECK_THROWS_AS(kernel_L(ev, PointQuad{{2, 0}, {2, 0}, {2, 0}, {1.0, 0.0}}),
                  std::domain_error);
}

TEST_CASE("four-argument kernel on the unit disk") {
  const auto ev = unit_disk_evaluator();
  const cplx l1 = kernel_L(ev, PointQuad{{2, 0}, {2, 0}, {2, 0}, {2, 0}});
  CHECK(std::abs(l1 - cplx(1.0 / 12.0)) <= 1e-14);
  const cplx l2 = kernel_L(ev, PointQuad{{2, 0}, {3, 0}, {4, 0}, {5, 0}});
  CHECK(std::abs(l2 - cplx(1.0 / 105.0)) <= 1e-15);
}

TEST_CASE("leading coefficient at infinity is the area over pi") {
  const auto two = KernelEvaluator::from_archipelago(
      make_archipelago({{cplx(-1.0, 0.0), 1.0}, {cplx(1.0, 0.0), 1.0}}));
  const cplx p(1e4, 0.0);
  const cplx l = kernel_L(two, PointQuad{p, p, p, p});
  const cplx scaled = p * std::conj(p) * p * std::conj(p) * l;
  CHECK(std::abs(scaled - cplx(2.0)) <= 1e-3);
}

TEST_CASE("single-disk closed form") {
  const DiskSpec d{cplx(0.0, 0.0), 1.0};
  CHECK(std::abs(kernel_L_disk_closed(d, {{2, 0}, {2, 0}, {2, 0}, {2, 0}}) - cplx(1.0 / 12.0)) <=
        1e-15);
  CHECK(std::abs(kernel_L_disk_closed(d, {{2, 0}, {3, 0}, {3, 0}, {2, 0}}) - cplx(1.0 / 30.0)) <=
        1e-15);
  const DiskSpec tiny{cplx(0.0, 0.0), 1e-9};
  CHECK(std::abs(kernel_L_disk_closed(tiny, {{2, 0}, {2, 0}, {2, 0}, {2, 0}})) <= 1e-18);
}

TEST_CASE("closed form matches the quotient path for a single disk") {
  std::mt19937_64 rng(21);
  const DiskSpec d{cplx(0.4, -0.3), 0.8};
  const auto ev = KernelEvaluator::from_archipelago(make_archipelago({{d.center, d.radius}}));
  for (int k = 0; k < 25; ++k) {
    const PointQuad q{random_point(rng, 2.0, 5.0), random_point(rng, 2.0, 5.0),
                      random_point(rng, 2.0, 5.0), random_point(rng, 2.0, 5.0)};
    const cplx a = kernel_L(ev, q), b = kernel_L_disk_closed(d, q);
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)));
  }
}

TEST_CASE("quotient and divided-difference paths agree") {
  std::mt19937_64 rng(33);
  const auto ev = KernelEvaluator::from_archipelago(
      make_archipelago({{cplx(-1.0, 0.2), 0.9}, {cplx(1.1, 0.0), 0.7}}));
  for (int k = 0; k < 40; ++k) {
    const PointQuad q{random_point(rng, 2.5, 6.0), random_point(rng, 2.5, 6.0),
                      random_point(rng, 2.5, 6.0), random_point(rng, 2.5, 6.0)};
    const cplx a = kernel_L(ev, q);
    const cplx b = kernel_L_divided_difference(ev, q);
    CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("antidiagonal values on the unit disk") {
  const auto ev = unit_disk_evaluator();
  CHECK(std::abs(antidiagonal_L(ev, {2, 0}, {3, 0}) - cplx(1.0 / 30.0)) <= 1e-14);
  CHECK(std::abs(antidiagonal_L(ev, {2, 0}, {2, 0}) - cplx(1.0 / 12.0)) <= 1e-14);
  CHECK(std::abs(antidiagonal_L(ev, {1e6, 0}, {1e6, 0})) <= 1e-20);
}

TEST_CASE("antidiagonal matches the finite-difference oracle") {
  std::mt19937_64 rng(17);
  const auto ev = KernelEvaluator::from_archipelago(
      make_archipelago({{cplx(-1.0, 0.0), 1.0}, {cplx(1.0, 0.5), 0.8}}));
  for (int k = 0; k < 10; ++k) {
    const cplx w = random_point(rng, 3.0, 6.0), z = random_point(rng, 3.0, 6.0);
    const cplx sym = antidiagonal_L(ev, w, z);
    const cplx fd = antidiagonal_fd_oracle(ev, w, z, 1e-5);
    CHECK(std::abs(sym - fd) <= 1e-7 * std::max(1.0, std::abs(sym)));
  }
}

TEST_CASE("antidiagonal agrees with the kernel limit path") {
  std::mt19937_64 rng(19);
  const auto ev = KernelEvaluator::from_archipelago(
      make_archipelago({{cplx(0.0, 0.0), 1.0}, {cplx(2.0, 0.0), 0.5}}));
  for (int k = 0; k < 10; ++k) {
    const cplx w = random_point(rng, 3.5, 6.0), z = random_point(rng, 3.5, 6.0);
    const cplx direct = antidiagonal_L(ev, w, z);
    const cplx limit = kernel_L(ev, PointQuad{w, z, z, w});
    CHECK(std::abs(direct - limit) <= 1e-8 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("M and N kernels") {
  const auto ev = unit_disk_evaluator();
  const auto [m, n] = kernel_M_N(ev, {2, 0}, {2, 0});
  CHECK(std::abs(m - cplx(0.25)) <= 1e-15);
  CHECK(std::abs(n - cplx(1.0 / 3.0)) <= 1e-15);
  CHECK(std::abs((1.0 + n) * (1.0 - m) - 1.0) <= 1e-12);

  const auto two = KernelEvaluator::from_archipelago(
      make_archipelago({{cplx(-1.0, 0.0), 1.0}, {cplx(1.0, 0.0), 1.0}}));
  const auto [m2, n2] = kernel_M_N(two, {3, 0}, {3, 0});
  CHECK(std::abs(m2 - cplx(0.296875)) <= 1e-15);

  const auto [mfar, nfar] = kernel_M_N(ev, {1e8, 0}, {1e8, 0});
  CHECK(std::abs(mfar) <= 1e-14);
  CHECK(std::abs(nfar) <= 1e-14);
}

TEST_CASE("merging identities for two separated disks") {
  const auto ev1 = KernelEvaluator::from_archipelago(make_archipelago({{cplx(0.0, 0.0), 1.0}}));
  const auto ev2 = KernelEvaluator::from_archipelago(make_archipelago({{cplx(4.0, 0.0), 1.0}}));
  const auto rep =
      identity_suite(ev1, ev2, PointQuad{{6, 0}, {6, 0}, {7, 0}, {7, 0}});
  CHECK(rep.merging1 <= 1e-12);
  CHECK(rep.merging3 <= 1e-12);
  CHECK(rep.merging5 <= 1e-12);
  CHECK(rep.n_product <= 1e-12);
  CHECK(rep.reverse_cauchy_schwarz >= -1e-12);
}

TEST_CASE("reverse Cauchy-Schwarz closed value on the unit disk") {
  const auto ev1 = unit_disk_evaluator();
  const auto rep = identity_suite(ev1, KernelEvaluator::empty(),
                                  PointQuad{{2, 0}, {3, 0}, {5, 0}, {5, 0}});
  CHECK(rep.reverse_cauchy_schwarz == doctest::Approx(1.0 / 36.0));
}

TEST_CASE("degenerate split against an empty island family") {
  const auto ev1 = unit_disk_evaluator();
  const auto empty = KernelEvaluator::empty();
  const PointQuad q{{2, 0}, {2.5, 0}, {3, 0}, {3.5, 0}};
  CHECK(std::abs(kernel_L(empty, q)) == 0.0);
  CHECK(std::abs(empty.eval({2, 0}, {3, 0}) - cplx(1.0)) == 0.0);
  const auto rep = identity_suite(ev1, empty, q);
  CHECK(rep.merging1 <= 1e-15);
  CHECK(rep.merging3 <= 1e-15);
  CHECK(rep.merging5 <= 1e-15);
}

TEST_CASE("hermitian symmetry of L") {
  std::mt19937_64 rng(41);
  const auto ev = KernelEvaluator::from_archipelago(
      make_archipelago({{cplx(-0.8, 0.1), 1.1}, {cplx(1.2, -0.4), 0.6}}));
  for (int k = 0; k < 30; ++k) {
    const cplx w = random_point(rng, 2.5, 6.0), z = random_point(rng, 2.5, 6.0);
    const cplx u = random_point(rng, 2.5, 6.0), v = random_point(rng, 2.5, 6.0);
    const cplx a = kernel_L(ev, PointQuad{w, z, u, v});
    const cplx b = kernel_L(ev, PointQuad{u, v, w, z});
    CHECK(std::abs(a - std::conj(b)) <= 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("diagonal non-negativity of L") {
  std::mt19937_64 rng(43);
  const auto ev = KernelEvaluator::from_archipelago(
      make_archipelago({{cplx(0.0, 0.0), 1.0}, {cplx(3.0, 0.0), 1.0}}));
  for (int k = 0; k < 40; ++k) {
    const cplx w = random_point(rng, 4.5, 8.0), z = random_point(rng, 4.5, 8.0);
    const cplx diag = kernel_L(ev, PointQuad{w, z, w, z});
    CHECK(diag.real() >= -1e-12);
    CHECK(std::abs(diag.imag()) <= 1e-12);
  }
}

TEST_CASE("first-order vanishing at infinity in each variable") {
  const auto ev = KernelEvaluator::from_archipelago(
      make_archipelago({{cplx(-1.0, 0.0), 1.0}, {cplx(1.0, 0.0), 1.0}}));
  const double r0 = ev.bounding_radius();
  const cplx z{3.0, 1.0}, u{3.5, -0.5}, v{4.0, 0.5};
  const auto scaled = [&](double mag) {
    const cplx w{mag, 0.5};
    return std::abs(kernel_L(ev, PointQuad{w, z, u, v})) * std::abs(w);
  };
  const double k10 = scaled(10.0 * r0);
  CHECK(scaled(20.0 * r0) <= 1.5 * k10);
  CHECK(scaled(40.0 * r0) <= 1.5 * k10);
}

TEST_CASE("raw quadrature-domain input matches the disk product") {
  const double s2 = std::numbers::sqrt2;
  const auto arch = make_archipelago({{cplx(-1.0, 0.0), s2}, {cplx(1.0, 0.0), s2}});
  const auto [P, Q] = defining_data(arch);
  const auto ev_disk = KernelEvaluator::from_archipelago(arch);
  const auto ev_raw = KernelEvaluator::from_raw(P, Q, arch.bounding_radius);
  std::mt19937_64 rng(55);
  for (int k = 0; k < 20; ++k) {
    const cplx w = random_point(rng, 3.0, 7.0), z = random_point(rng, 3.0, 7.0);
    CHECK(std::abs(ev_disk.eval(w, z) - ev_raw.eval(w, z)) <= 1e-12);
    CHECK(std::abs(ev_disk.eval_dw(w, z) - ev_raw.eval_dw(w, z)) <= 1e-12);
    CHECK(std::abs(ev_disk.eval_dzbar(w, z) - ev_raw.eval_dzbar(w, z)) <= 1e-12);
    CHECK(std::abs(ev_disk.eval_dwdzbar(w, z) - ev_raw.eval_dwdzbar(w, z)) <= 1e-12);
  }
}

}  // TEST_SUITE
