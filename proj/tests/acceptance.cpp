// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "arch/chain.hpp"
#include "arch/leveldeform.hpp"
#include "arch/positivity.hpp"
#include "arch/spherical.hpp"

using namespace arch;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& title, const std::function<bool(std::string&)>& fn) {
  const auto start = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = fn(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("[%s] criterion %2d: %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", number, title.c_str(),
              secs, detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++g_failures;
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

cplx random_point(std::mt19937_64& rng, double lo, double hi) {
  return std::polar(lo + (hi - lo) * unit(rng), 2.0 * std::numbers::pi * unit(rng));
}

ChainOutcome two_disk_chain(double a, int K) {
  const auto arch = make_archipelago({{cplx(-a, 0.0), 1.0}, {cplx(a, 0.0), 1.0}});
  const auto [P, Q] = defining_data(arch);
  return run_chain_for(P, Q, K, 1e-10, 4.0 * (arch.bounding_radius + 1.0));
}

bool check(bool condition, const char* what, std::string& detail) {
  if (!condition && detail.size() < 240) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
  return condition;
}

}  // namespace

int main() {
  const double pi = std::numbers::pi;
  const double s2 = std::numbers::sqrt2;

  criterion(1, "two-disk thresholds 1/sqrt2, sqrt3/2, sqrt((2+sqrt2)/4)", [&](std::string& d) {
    const auto t = two_disk_threshold_table(3);
    bool ok = check(t.size() == 3, "table size", d);
    ok &= check(std::abs(t[0] - 1.0 / s2) <= 1e-7, "k=0 threshold", d);
    ok &= check(std::abs(t[1] - std::sqrt(3.0) / 2.0) <= 1e-7, "k=1 threshold", d);
    ok &= check(std::abs(t[2] - std::sqrt((2.0 + s2) / 4.0)) <= 1e-7, "k=2 threshold", d);
    std::ostringstream os;
    os.precision(8);
    os << "a* = " << t[0] << ", " << t[1] << ", " << t[2];
    if (ok) d = os.str();
    return ok;
  });

  criterion(2, "chain survival at tangency, failure steps at a = 0.8, 0.9", [&](std::string& d) {
    const auto tangent = two_disk_chain(1.0, 50);
    bool ok = check(tangent.run && tangent.run->report.certified, "a=1 survives K=50", d);
    if (tangent.run) {
      for (const auto& st : tangent.run->history) {
        ok &= check(std::abs(st.trace_A2 - 2.0) <= 1e-9, "trace A_k^2 = 2 +- 1e-9", d);
        ok &= check(st.norm_D <= 5.0, "norm D_k <= 5", d);
      }
    }
    const auto a08 = two_disk_chain(0.8, 10);
    ok &= check(a08.run && a08.run->report.failed_at == 1, "a=0.8 fails at step 1", d);
    const auto a09 = two_disk_chain(0.9, 10);
    ok &= check(a09.run && a09.run->report.failed_at == 2, "a=0.9 fails at step 2", d);
    return ok;
  });

  criterion(3, "kernel cross-path agreement on the unit disk at (2,2,2,2)", [&](std::string& d) {
    const auto arch = make_archipelago({{cplx(0.0, 0.0), 1.0}});
    const auto [P, Q] = defining_data(arch);
    const auto ev = KernelEvaluator::from_archipelago(arch);
    const PointQuad q{{2, 0}, {2, 0}, {2, 0}, {2, 0}};
    const cplx rational = kernel_L(ev, q);
    bool ok = check(std::abs(rational - cplx(1.0 / 12.0)) <= 1e-14, "closed value 1/12", d);

    const auto run30 = run_chain_for(P, Q, 30, 1e-12, 8.0);
    const cplx via_op = operator_L(assemble_truncated(*run30.run, 30), q);
    ok &= check(std::abs(rational - via_op) <= 1e-6, "|kernel_L - operator_L| <= 1e-6", d);

    const auto run40 = run_chain_for(P, Q, 40, 1e-12, 8.0);
    const cplx via_series = neumann_L(*run40.run, q, 40);
    ok &= check(std::abs(rational - via_series) <= 1e-10, "|kernel_L - neumann_L| <= 1e-10", d);
    return ok;
  });

  criterion(4, "sampled PSD boundary of 1-E transitions at r = sqrt2", [&](std::string& d) {
    bool ok = true;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      double first_not_psd = -1.0;
      bool seen = false;
      for (int step = 0; step <= 11; ++step) {
        const double r = 1.30 + 0.02 * step;
        const auto arch = make_archipelago({{cplx(-1.0, 0.0), r}, {cplx(1.0, 0.0), r}});
        const auto [lo, hi] = default_band(arch.bounding_radius);
        const auto rep = gram_psd(KernelEvaluator::from_archipelago(arch), KernelTag::OneMinusE,
                                  SamplePlan{40, lo, hi, seed});
        if (!rep.psd && !seen) {
          first_not_psd = r;
          seen = true;
        }
        if (seen) ok &= check(!rep.psd, "monotone transition", d);
      }
      ok &= check(seen, "transition happens within the sweep", d);
      ok &= check(std::abs(first_not_psd - s2) <= 0.02 + 1e-9, "transition within one step", d);
    }
    return ok;
  });

  criterion(5, "quadrature identity over t and harmonic h at n = 2000", [&](std::string& d) {
    bool ok = true;
    double worst = 0.0;
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      for (HarmonicTag h : {HarmonicTag::One, HarmonicTag::Z, HarmonicTag::Z2, HarmonicTag::Z3}) {
        const auto rep = quadrature_identity_check(t, h, 2000);
        worst = std::max(worst, rep.abs_err);
        ok &= check(rep.abs_err <= 0.005 * 4.0 * pi, "abs err <= 0.5% of 4pi", d);
      }
    }
    if (ok) {
      std::ostringstream os;
      os.precision(3);
      os << "worst abs err " << worst << " vs gate " << 0.005 * 4.0 * pi;
      d = os.str();
    }
    return ok;
  });

  criterion(6, "branch points at t = 1/2 against the root-finding oracle", [&](std::string& d) {
    const auto bp = branch_points(0.5);
    // Independent oracle: companion-matrix roots of z^4 + 2.5 z^2 + 0.5.
    NodePolynomial quartic;
    quartic.coeffs = {cplx(0.5), cplx(0.0), cplx(2.5), cplx(0.0)};
    double lo = 1e9, hi = 0.0;
    for (const auto& root : polynomial_roots(quartic)) {
      lo = std::min(lo, std::abs(root.imag()));
      hi = std::max(hi, std::abs(root.imag()));
    }
    bool ok = check(std::abs(bp.inner_A - lo) <= 1e-6, "A within 1e-6 of the oracle", d);
    ok &= check(std::abs(bp.outer_B - hi) <= 1e-6, "B within 1e-6 of the oracle", d);
    std::ostringstream os;
    os.precision(9);
    os << "(A, B) = (" << bp.inner_A << ", " << bp.outer_B << ")";
    if (ok) d = os.str();
    return ok;
  });

  criterion(7, "spherical geometry of the extremal pair", [&](std::string& d) {
    const auto moved = spherical_area({cplx(1.0, 0.0), s2}, 1024);
    bool ok = check(std::abs(moved.closed_form - 2.0 * pi) <= 1e-6, "closed form 2pi", d);
    ok &= check(std::abs(moved.numeric - 2.0 * pi) <= 1e-6 * (1.0 + 2.0 * pi), "numeric 2pi", d);
    const auto rep = orthogonal_halfplane_check(512);
    ok &= check(rep.line_residual <= 1e-10, "line residual <= 1e-10", d);
    ok &= check(rep.area_sum_err <= 1e-6, "area sum 4pi +- 1e-6", d);
    return ok;
  });

  criterion(8, "indefinite coefficient kernel of the ellipse model", [&](std::string& d) {
    const SamplePlan plan{24, 3.75, 5.5, 11};
    const auto probe64 = ellipse_negativity_probe(0.5, 64, plan);
    bool ok = check(probe64.min_eig < 0.0, "min_eig < 0 at N = 64", d);
    const auto probe128 = ellipse_negativity_probe(0.5, 128, plan);
    ok &= check(probe128.min_eig < 0.0, "sign stable at N = 128", d);
    std::ostringstream os;
    os.precision(3);
    os << "min_eig = " << probe64.min_eig;
    if (ok) d = os.str();
    return ok;
  });

  criterion(9, "merging identities, closed form and operator path", [&](std::string& d) {
    const auto ev1 = KernelEvaluator::from_archipelago(make_archipelago({{cplx(0.0, 0.0), 1.0}}));
    const auto ev2 = KernelEvaluator::from_archipelago(make_archipelago({{cplx(4.0, 0.0), 1.0}}));
    std::mt19937_64 rng(9);
    bool ok = true;
    for (int k = 0; k < 20; ++k) {
      const PointQuad q{random_point(rng, 5.5, 8.0), random_point(rng, 5.5, 8.0),
                        random_point(rng, 5.5, 8.0), random_point(rng, 5.5, 8.0)};
      const auto rep = identity_suite(ev1, ev2, q);
      ok &= check(rep.max_residual() <= 1e-12, "closed-form residuals <= 1e-12", d);
      ok &= check(rep.reverse_cauchy_schwarz >= -1e-12, "reverse Cauchy-Schwarz", d);
    }
    std::vector<cplx> pts;
    for (int k = 0; k < 10; ++k)
      pts.push_back(std::polar(6.0, 2.0 * pi * (k + 0.3) / 10.0));
    const auto mg = merging_gram_residual({cplx(0.0, 0.0), 1.0}, {cplx(4.0, 0.0), 1.0}, 40, pts);
    ok &= check(mg.closed_form_max <= 1e-12, "Gram closed form <= 1e-12", d);
    ok &= check(mg.operator_max <= 1e-8, "operator path <= 1e-8 at N = 40", d);
    return ok;
  });

  criterion(10, "property suites across seeds 1..10", [&](std::string& d) {
    bool ok = true;
    const auto pair = make_archipelago({{cplx(-1.0, 0.0), 1.0}, {cplx(1.0, 0.0), 1.0}});
    const auto ev = KernelEvaluator::from_archipelago(pair);
    const auto [lo, hi] = default_band(pair.bounding_radius);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      std::mt19937_64 rng(seed);
      for (int k = 0; k < 12; ++k) {
        const cplx w = random_point(rng, lo, hi), z = random_point(rng, lo, hi);
        const cplx u = random_point(rng, lo, hi), v = random_point(rng, lo, hi);
        const cplx lwzuv = kernel_L(ev, {w, z, u, v});
        const cplx luvwz = kernel_L(ev, {u, v, w, z});
        ok &= check(std::abs(lwzuv - std::conj(luvwz)) <= 1e-12 * std::max(1.0, std::abs(lwzuv)),
                    "hermitian symmetry of L", d);
        const cplx diag = kernel_L(ev, {w, z, w, z});
        ok &= check(diag.real() >= -1e-12, "diagonal non-negativity", d);
        const double rcs =
            std::norm(ev.eval(w, z)) - ev.eval(w, w).real() * ev.eval(z, z).real();
        ok &= check(rcs >= -1e-12, "reverse Cauchy-Schwarz", d);
      }
      ok &= check(cnd_check_E(ev, SamplePlan{24, lo, hi, seed}).psd,
                  "conditional negative definiteness of E", d);
    }
    // Chain invariants: trace conservation, iso-spectrality, intertwining.
    const auto run = two_disk_chain(1.0, 40);
    for (const auto& st : run.run->history)
      ok &= check(std::abs(st.trace_A2 - 2.0) <= 1e-9, "trace conservation", d);
    const auto single = make_archipelago({{cplx(0.5, -0.25), 0.75}});
    const auto [Ps, Qs] = defining_data(single);
    const auto srun = run_chain_for(Ps, Qs, 25, 1e-10, 4.0 * (single.bounding_radius + 1.0));
    for (const auto& st : srun.run->history)
      ok &= check(std::abs(st.trace_A2 - 0.75 * 0.75) <= 1e-9, "single-disk trace = r^2", d);
    const auto& hist = run.run->history;
    for (std::size_t k = 0; k + 1 < hist.size(); ++k) {
      Eigen::ComplexEigenSolver<Matrix> e1(hist[k].D, false), e2(hist[k + 1].D, false);
      std::vector<double> r1{e1.eigenvalues()(0).real(), e1.eigenvalues()(1).real()};
      std::vector<double> r2{e2.eigenvalues()(0).real(), e2.eigenvalues()(1).real()};
      std::sort(r1.begin(), r1.end());
      std::sort(r2.begin(), r2.end());
      ok &= check(std::abs(r1[0] - r2[0]) <= 1e-8 && std::abs(r1[1] - r2[1]) <= 1e-8,
                  "iso-spectrality", d);
      const double resid = operator_norm(hist[k].A * hist[k + 1].D - hist[k].D * hist[k].A);
      ok &= check(resid <= 1e-10 * (1.0 + hist[k].norm_D), "intertwining", d);
    }
    return ok;
  });

  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
  } else {
    std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
  }
  return g_failures;
}
