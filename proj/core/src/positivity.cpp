#include "arch/positivity.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace arch {

namespace {

// A chain failure is attributed to the configuration only when it is stable
// under a relative 1e-13 perturbation of the defining kernel; otherwise the
// failure step sits at the input round-off horizon of the recurrence and the
// run counts as a truncated survival, not as overlap evidence.
bool chain_failure_is_stable(const NodePolynomial& P, const HermitianPolynomialKernel& Q,
                             int K, double tol, double norm_cap, const ChainOutcome& observed) {
  std::mt19937_64 rng(42);
  const auto jitter = [&rng]() {
    return 1.0 + 1e-13 * (2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0);
  };
  NodePolynomial P2 = P;
  for (auto& c : P2.coeffs) c *= jitter();
  HermitianPolynomialKernel Q2 = Q;
  const int d = Q2.degree();
  for (int j = 0; j <= d; ++j) {
    for (int k = j; k <= d; ++k) {
      if (j == d && k == d) continue;  // keep the monic top
      Q2.coeffs(j, k) *= jitter();
      Q2.coeffs(k, j) = std::conj(Q2.coeffs(j, k));
    }
  }
  const ChainOutcome shadow = run_chain_for(P2, Q2, K, tol, norm_cap);
  if (observed.seed.status != SeedStatus::Ok)
    return shadow.seed.status == observed.seed.status;
  if (shadow.seed.status != SeedStatus::Ok) return false;
  return shadow.run->report.failed_at == observed.run->report.failed_at &&
         shadow.run->report.mode == observed.run->report.mode;
}

GramReport eig_to_report(const Matrix& G, KernelTag tag, int n, std::uint64_t seed, double tol) {
  const EigReport eig = herm_min_eig(G, tol);
  GramReport rep;
  rep.kernel = kernel_tag_name(tag);
  rep.n = n;
  rep.seed = seed;
  rep.min_eig = eig.min_eig;
  // Effective threshold: the verdict is min_eig >= -tolerance.
  rep.tolerance = tol * std::max(1.0, eig.spectral_radius);
  rep.psd = eig.psd;
  return rep;
}

}  // namespace

GramReport gram_psd_points(const KernelEvaluator& ev, KernelTag tag,
                           std::span<const std::pair<cplx, cplx>> pairs,
                           std::uint64_t seed_echo) {
  const int n = static_cast<int>(pairs.size());
  if (n < 1) throw std::invalid_argument("gram_psd: need at least one sample");
  Matrix G(n, n);
  switch (tag) {
    case KernelTag::OneMinusE:
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          G(a, b) = 1.0 - exp_transform(ev, pairs[static_cast<std::size_t>(a)].first,
                                        pairs[static_cast<std::size_t>(b)].first);
      break;
    case KernelTag::N:
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          G(a, b) = kernel_M_N(ev, pairs[static_cast<std::size_t>(a)].first,
                               pairs[static_cast<std::size_t>(b)].first)
                        .second;
      break;
    case KernelTag::AntidiagonalL:
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          G(a, b) = antidiagonal_L(ev, pairs[static_cast<std::size_t>(a)].first,
                                   pairs[static_cast<std::size_t>(b)].first);
      break;
    case KernelTag::L:
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          const auto& [wa, za] = pairs[static_cast<std::size_t>(a)];
          const auto& [wb, zb] = pairs[static_cast<std::size_t>(b)];
          G(a, b) = kernel_L(ev, PointQuad{wa, za, wb, zb});
        }
      }
      break;
  }
  return eig_to_report(G, tag, n, seed_echo, 1e-10);
}

GramReport gram_psd(const KernelEvaluator& ev, KernelTag tag, const SamplePlan& plan) {
  if (plan.r_lo < ev.guard_radius() - 1e-12)
    throw std::invalid_argument("gram_psd: plan band inside the guarded region");
  const auto pairs = plan_pairs(plan);
  return gram_psd_points(ev, tag, pairs, plan.seed);
}

GramReport cnd_check_E(const KernelEvaluator& ev, const SamplePlan& plan) {
  if (plan.n < 2) throw std::invalid_argument("cnd_check_E: need at least two points");
  if (plan.r_lo < ev.guard_radius() - 1e-12)
    throw std::invalid_argument("cnd_check_E: plan band inside the guarded region");
  const auto pts = plan_points(plan);
  const int n = plan.n;
  Matrix G(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      G(a, b) = exp_transform(ev, pts[static_cast<std::size_t>(a)], pts[static_cast<std::size_t>(b)]);

  // Project onto the zero-sum subspace: P = I - (1/n) 1 1^T.
  Matrix P = Matrix::Identity(n, n) - Matrix::Constant(n, n, cplx(1.0 / n));
  const Matrix A = hermitize(P.adjoint() * G * P);
  Eigen::SelfAdjointEigenSolver<Matrix> es(A, Eigen::EigenvaluesOnly);
  const double max_form = es.eigenvalues()(es.eigenvalues().size() - 1);

  GramReport rep;
  rep.kernel = "E_cnd";
  rep.n = n;
  rep.seed = plan.seed;
  rep.min_eig = max_form;  // maximum projected quadratic form
  rep.tolerance = 1e-10;
  rep.psd = max_form <= 1e-10;
  return rep;
}

CertificateReport certificate_bounded(const KernelEvaluator& ev, const SamplePlan& plan,
                                      int truncation) {
  if (plan.r_lo < ev.guard_radius() - 1e-12)
    throw std::invalid_argument("certificate_bounded: plan band inside the guarded region");
  CertificateReport rep;
  rep.plan = plan;

  const auto outcome = run_chain_for(ev.node_polynomial(), ev.defining_kernel(), truncation,
                                     1e-10, 4.0 * (ev.bounding_radius() + 1.0));
  if (outcome.seed.status != SeedStatus::Ok || !outcome.run->report.certified) {
    rep.bounded_ok = false;  // no operator model at this truncation
    return rep;
  }
  const TruncatedOperator op = assemble_truncated(*outcome.run, truncation);

  const auto pairs = plan_pairs(plan);
  const int n = plan.n;
  std::vector<Vector> rho(static_cast<std::size_t>(n)), trho(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    rho[static_cast<std::size_t>(k)] =
        resolvent_pair(op, pairs[static_cast<std::size_t>(k)].first, pairs[static_cast<std::size_t>(k)].second);
    trho[static_cast<std::size_t>(k)] = op.T * rho[static_cast<std::size_t>(k)];
  }
  Matrix GL(n, n), GB(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      GL(a, b) = rho[static_cast<std::size_t>(b)].dot(rho[static_cast<std::size_t>(a)]);
      GB(a, b) = trho[static_cast<std::size_t>(b)].dot(trho[static_cast<std::size_t>(a)]);
    }
  }
  const EigReport eb = herm_min_eig(GB, 1e-10);
  rep.gb_min_eig = eb.min_eig;
  const EigReport el = herm_min_eig(GL, 1e-10);
  if (el.psd) rep.c_bound = generalized_scale_bound(GB, GL, 1e-10);
  rep.bounded_ok = eb.psd && rep.c_bound.has_value();
  return rep;
}

CertificateReport certificate_point_eval(const KernelEvaluator& ev, cplx lambda,
                                         const SamplePlan& plan) {
  if (plan.r_lo < ev.guard_radius() - 1e-12)
    throw std::invalid_argument("certificate_point_eval: plan band inside the guarded region");
  const double mag = std::abs(lambda);
  if (mag < plan.r_lo - 1e-12 || mag > plan.r_hi + 1e-12)
    throw std::invalid_argument("certificate_point_eval: lambda outside the sampling band");

  SamplePlan effective = plan;
  auto pairs = plan_pairs(effective);
  // Resample when lambda collides with a sample point.
  for (int attempt = 0; attempt < 16; ++attempt) {
    bool collision = false;
    for (const auto& [w, z] : pairs) {
      if (std::abs(w - lambda) < 1e-8 || std::abs(z - lambda) < 1e-8) {
        collision = true;
        break;
      }
    }
    if (!collision) break;
    effective.seed = effective.seed * 6364136223846793005ULL + 1442695040888963407ULL;
    pairs = plan_pairs(effective);
  }

  const int n = effective.n;
  const cplx lb = std::conj(lambda);
  Matrix G1(n, n), G2(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const auto& [w, z] = pairs[static_cast<std::size_t>(a)];
      const auto& [u, v] = pairs[static_cast<std::size_t>(b)];
      const cplx l_ll = kernel_L(ev, PointQuad{lambda, z, lambda, v});
      const cplx l_wl = kernel_L(ev, PointQuad{w, z, lambda, v});
      const cplx l_lu = kernel_L(ev, PointQuad{lambda, z, u, v});
      const cplx l_wu = kernel_L(ev, PointQuad{w, z, u, v});
      G1(a, b) = (l_ll - l_wl - l_lu + l_wu) / ((lambda - w) * (lb - std::conj(u)));
      G2(a, b) = l_wu;
    }
  }
  CertificateReport rep;
  rep.plan = effective;
  rep.lambda = lambda;
  const EigReport e1 = herm_min_eig(G1, 1e-10);
  rep.g1_min_eig = e1.min_eig;
  if (e1.psd) rep.c_point = generalized_scale_bound(G2, G1, 1e-10);
  rep.pointeval_ok = e1.psd && rep.c_point.has_value() && *rep.c_point > 0.0;
  return rep;
}

bool two_disk_closed_form(const DiskSpec& d1, const DiskSpec& d2) {
  const double lhs = d1.radius * d1.radius + d2.radius * d2.radius;
  const double rhs = std::norm(d1.center - d2.center);
  // Equality (orthogonally crossing circles) counts as non-overlapping;
  // the slack absorbs representation round-off of the squared radii.
  return lhs <= rhs + 1e-12 * std::max({1.0, lhs, rhs});
}

const char* overlap_verdict_name(OverlapVerdict v) {
  switch (v) {
    case OverlapVerdict::DisjointCertified: return "DISJOINT_CERTIFIED";
    case OverlapVerdict::OverlapDetected: return "OVERLAP_DETECTED";
    case OverlapVerdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

std::pair<double, double> default_band(double bounding_radius) {
  return {1.5 * bounding_radius + 0.5, 3.0 * bounding_radius + 1.0};
}

OverlapDecision decide_overlap(const ArchipelagoSpec& arch, const SamplePlan& plan,
                               int chain_budget, double tol) {
  OverlapDecision dec;
  dec.chain_budget = chain_budget;
  dec.tolerance = tol;
  const auto ev = KernelEvaluator::from_archipelago(arch);

  bool overlap = false;

  // Stage (i): closed form, authoritative where applicable.
  if (arch.disks.size() == 2) {
    const bool ok = two_disk_closed_form(arch.disks[0], arch.disks[1]);
    dec.stages.push_back({"two_disk_closed_form", ok, 0.0, std::nullopt,
                          0, plan.seed, ok ? "r1^2+r2^2 <= |a1-a2|^2" : "r1^2+r2^2 > |a1-a2|^2"});
    if (!ok) overlap = true;
  }

  // Stage (ii): sampled certificates. Only a violation beyond 10x the
  // effective tolerance is treated as sound evidence of overlap.
  if (!overlap) {
    const auto sound_fail = [&](const GramReport& g) {
      return !g.psd && g.min_eig < -10.0 * g.tolerance;
    };
    const GramReport g_m = gram_psd(ev, KernelTag::OneMinusE, plan);
    dec.stages.push_back({"gram_1_minus_E", g_m.psd, g_m.min_eig, std::nullopt, g_m.n, g_m.seed, ""});
    const GramReport g_l = gram_psd(ev, KernelTag::L, plan);
    dec.stages.push_back({"gram_L", g_l.psd, g_l.min_eig, std::nullopt, g_l.n, g_l.seed, ""});
    const GramReport g_c = cnd_check_E(ev, plan);
    dec.stages.push_back({"cnd_E", g_c.psd, g_c.min_eig, std::nullopt, g_c.n, g_c.seed,
                          "max projected form"});
    const cplx lambda{0.5 * (plan.r_lo + plan.r_hi), 0.0};
    const CertificateReport pe = certificate_point_eval(ev, lambda, plan);
    dec.stages.push_back({"certificate_point_eval", pe.pointeval_ok, pe.g1_min_eig, pe.c_point,
                          plan.n, plan.seed, ""});
    if (sound_fail(g_m) || sound_fail(g_l) || g_c.min_eig > 10.0 * tol ||
        (!pe.pointeval_ok && pe.g1_min_eig < -10.0 * tol))
      overlap = true;
  }

  // Stage (iii): the matrix chain, the constructive certificate.
  bool chain_ok = false;
  if (!overlap) {
    const double cap = 4.0 * (arch.bounding_radius + 1.0);
    const auto outcome =
        run_chain_for(ev.node_polynomial(), ev.defining_kernel(), chain_budget, tol, cap);
    const auto stable = [&]() {
      return chain_failure_is_stable(ev.node_polynomial(), ev.defining_kernel(), chain_budget,
                                     tol, cap, outcome);
    };
    if (outcome.seed.status == SeedStatus::NotPsd) {
      dec.stages.push_back({"sos_seed", false, outcome.seed.offending_eigenvalue, std::nullopt, 0,
                            plan.seed, "coefficient matrix not PSD"});
      dec.chain_failed_at = 0;
      if (stable()) overlap = true;
    } else if (outcome.seed.status == SeedStatus::DegenerateSeed) {
      dec.stages.push_back({"sos_seed", false, 0.0, std::nullopt, 0, plan.seed,
                            "degenerate seed: no exact-degree decomposition"});
      dec.chain_failed_at = 0;
      if (stable()) overlap = true;
    } else {
      dec.chain_trace = outcome.run->history;
      if (!outcome.run->report.certified) {
        dec.chain_failed_at = outcome.run->report.failed_at;
        if (stable()) {
          dec.stages.push_back({"matrix_chain", false, 0.0, std::nullopt, chain_budget, plan.seed,
                                std::string("FAILED_AT(") + std::to_string(dec.chain_failed_at) +
                                    ", " + chain_failure_name(outcome.run->report.mode) + ")"});
          overlap = true;
        } else {
          // Failure step moves under a 1e-13 kernel perturbation: the run hit
          // the input round-off horizon, so it only certifies up to there.
          const int horizon = std::max(0, dec.chain_failed_at - 1);
          dec.stages.push_back({"matrix_chain", true, 0.0, std::nullopt, chain_budget, plan.seed,
                                "CERTIFIED_UP_TO_" + std::to_string(horizon) +
                                    " (failure at the round-off horizon, not attributed)"});
          chain_ok = true;
        }
      } else {
        chain_ok = true;
        dec.stages.push_back({"matrix_chain", true, 0.0, std::nullopt, chain_budget, plan.seed,
                              "CERTIFIED_UP_TO_" + std::to_string(chain_budget)});
      }
      if (chain_ok) {
        const CertificateReport cb = certificate_bounded(ev, plan);
        dec.stages.push_back({"certificate_bounded", cb.bounded_ok, cb.gb_min_eig, cb.c_bound,
                              plan.n, plan.seed, ""});
      }
    }
  }

  if (overlap) {
    dec.verdict = OverlapVerdict::OverlapDetected;
    return dec;
  }

  // Chain survival is a semi-decision; upgrade only with the pairwise
  // geometric confirmation (tangency counts as non-overlapping).
  bool confirmed = chain_ok;
  for (std::size_t i = 0; i < arch.disks.size() && confirmed; ++i) {
    for (std::size_t j = i + 1; j < arch.disks.size() && confirmed; ++j) {
      const double dist = std::abs(arch.disks[i].center - arch.disks[j].center);
      if (dist < arch.disks[i].radius + arch.disks[j].radius - 1e-12) confirmed = false;
    }
  }
  dec.verdict = confirmed ? OverlapVerdict::DisjointCertified : OverlapVerdict::Inconclusive;
  return dec;
}

}  // namespace arch
