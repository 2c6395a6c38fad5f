#pragma once

#include <span>
#include <string>

#include "arch/chain.hpp"

namespace arch {

/// Finite section of the chosen kernel on plan samples (pairs for the
/// four-argument kernels, single points for 1-E and N).
GramReport gram_psd(const KernelEvaluator& ev, KernelTag tag, const SamplePlan& plan);

/// Same, over explicit (w, z) pairs (single points taken from .first).
GramReport gram_psd_points(const KernelEvaluator& ev, KernelTag tag,
                           std::span<const std::pair<cplx, cplx>> pairs,
                           std::uint64_t seed_echo = 0);

/// Conditional negative definiteness of E: the Gram of E on the plan's
/// points, projected onto weight vectors summing to zero. min_eig holds the
/// maximum projected quadratic form; the verdict is "<= 1e-10" here.
GramReport cnd_check_E(const KernelEvaluator& ev, const SamplePlan& plan);

/// Certificates for the two positivity conditions at infinity.
struct CertificateReport {
  bool bounded_ok = false;
  std::optional<double> c_bound;
  bool pointeval_ok = false;
  std::optional<double> c_point;
  cplx lambda{0.0, 0.0};
  double g1_min_eig = 0.0;  // divided-difference Gram (point-evaluation path)
  double gb_min_eig = 0.0;  // double finite-difference Gram (bounded path)
  SamplePlan plan;
};

/// Boundedness certificate: assembles the Gram of rho(w,z) and of T rho(w,z)
/// through the truncated operator model and bounds ||T||^2 by the smallest C
/// with C*G_L - G_B >= 0. `truncation` is the block budget of the model.
CertificateReport certificate_bounded(const KernelEvaluator& ev, const SamplePlan& plan,
                                      int truncation = 24);

/// Point-evaluation certificate at lambda: Gram of the divided differences
/// L([lambda,w],z;[lambda,u],v) must be PSD and dominate L after scaling.
/// A lambda colliding with a sample point (within 1e-8) triggers a resample.
CertificateReport certificate_point_eval(const KernelEvaluator& ev, cplx lambda,
                                         const SamplePlan& plan);

/// Two-disk positivity bound: r1^2 + r2^2 <= |a1 - a2|^2, equality included.
bool two_disk_closed_form(const DiskSpec& d1, const DiskSpec& d2);

enum class OverlapVerdict { DisjointCertified, OverlapDetected, Inconclusive };
const char* overlap_verdict_name(OverlapVerdict v);

struct OverlapStage {
  std::string name;
  bool passed = false;
  double min_eig = 0.0;
  std::optional<double> C;
  int n = 0;
  std::uint64_t seed = 0;
  std::string detail;
};

struct OverlapDecision {
  OverlapVerdict verdict = OverlapVerdict::Inconclusive;
  int chain_budget = 0;
  int chain_failed_at = 0;  // 0 when the chain survived
  std::vector<OverlapStage> stages;
  std::vector<ChainState> chain_trace;
  double tolerance = 0.0;
};

/// Three-stage decision with short-circuit: (i) the two-disk closed form
/// when |J| = 2, (ii) sampled certificates (a sound failure requires a
/// violation beyond 10x tolerance), (iii) the matrix-chain run. Chain
/// survival alone is not a proof: DISJOINT_CERTIFIED additionally requires
/// the pairwise closed-form confirmation |a_i - a_j| >= r_i + r_j,
/// otherwise the verdict is INCONCLUSIVE(K).
OverlapDecision decide_overlap(const ArchipelagoSpec& arch, const SamplePlan& plan,
                               int chain_budget, double tol = 1e-10);

/// Default radial band used by the decision pipeline: [1.5 R0 + 0.5, 3 R0 + 1].
std::pair<double, double> default_band(double bounding_radius);

}  // namespace arch
