#pragma once

#include <optional>
#include <vector>

#include "arch/domains.hpp"

namespace arch {

/// Arguments of the four-argument kernel L(w, z; u, v). The kernel is
/// analytic in w, v and anti-analytic in z, u.
struct PointQuad {
  cplx w, z, u, v;
};

/// Evaluates the exponential transform E of a disk union (product of the
/// per-disk factors 1 - r^2/((w-a)(conj z - conj a))), or of a raw
/// quadrature-domain pair via E = Q(w,z)/(P(w) conj(P(z))). All evaluations
/// are restricted to |argument| >= guard * R0.
class KernelEvaluator {
 public:
  static KernelEvaluator from_archipelago(ArchipelagoSpec arch, double guard = 1.05);
  static KernelEvaluator from_raw(NodePolynomial P, HermitianPolynomialKernel Q,
                                  double bounding_radius, double guard = 1.05);
  /// No islands at all: E == 1. Used for degenerate merging splits.
  static KernelEvaluator empty(double guard = 1.05);

  /// Union of the two island families (E multiplies).
  static KernelEvaluator product(const KernelEvaluator& a, const KernelEvaluator& b);

  double bounding_radius() const { return r0_; }
  double guard_factor() const { return guard_; }
  double guard_radius() const { return guard_ * r0_; }
  bool has_disks() const { return use_disks_; }
  const std::vector<DiskSpec>& disks() const { return disks_; }
  const NodePolynomial& node_polynomial() const { return P_; }
  const HermitianPolynomialKernel& defining_kernel() const { return Q_; }

  /// Throws std::domain_error when |p| < guard * R0.
  void require_guarded(cplx p) const;

  cplx eval(cplx w, cplx z) const;           // E(w, z)
  cplx eval_dw(cplx w, cplx z) const;        // dE/dw
  cplx eval_dzbar(cplx w, cplx z) const;     // dE/d(conj z)
  cplx eval_dwdzbar(cplx w, cplx z) const;   // mixed second derivative

 private:
  KernelEvaluator() = default;

  bool use_disks_ = true;
  std::vector<DiskSpec> disks_;
  NodePolynomial P_;
  HermitianPolynomialKernel Q_;
  double r0_ = 0.0;
  double guard_ = 1.05;
};

/// E(w, z), guarded.
cplx exp_transform(const KernelEvaluator& ev, cplx w, cplx z);

/// L(w,z;u,v) = (E(v,z)E(w,u) - E(w,z)E(v,u)) / ((v-w)(conj u - conj z) E(w,u)).
/// Near the 0/0 loci v = w and conj u = conj z the divided-difference
/// determinant form takes over (threshold 1e-6 * scale per slot).
cplx kernel_L(const KernelEvaluator& ev, const PointQuad& q);

/// Same value through the divided-difference determinant on every input;
/// exposed for cross-path tests.
cplx kernel_L_divided_difference(const KernelEvaluator& ev, const PointQuad& q);

/// Closed form for a single disk:
/// r^2 / ((w-a)(zb-ab)(v-a)(ub-ab)) * 1/(1 - r^2/((w-a)(ub-ab))).
cplx kernel_L_disk_closed(const DiskSpec& d, const PointQuad& q);

/// Anti-diagonal value L(w,z;z,w) = -E(w,z) d/dw [ (dE/dzbar)/E ](w,z),
/// computed from the per-factor logarithmic derivatives.
cplx antidiagonal_L(const KernelEvaluator& ev, cplx w, cplx z);

/// M = 1 - E and N = 1/E - 1; (1+N)(1-M) = 1.
std::pair<cplx, cplx> kernel_M_N(const KernelEvaluator& ev, cplx w, cplx z);

/// Absolute residuals of the merging identities between the union kernel
/// and the per-island kernels, together with the product rule for the
/// resolvent Gram kernel 1 + N = (1+N1)(1+N2) and the reverse
/// Cauchy-Schwarz value |E(w,z)|^2 - E(w,w)E(z,z) (non-negative).
struct IdentityReport {
  double merging1 = 0.0;
  double merging3 = 0.0;
  double merging5 = 0.0;
  double n_product = 0.0;
  double reverse_cauchy_schwarz = 0.0;  // the value itself, >= -1e-12 expected
  double max_residual() const;
};
IdentityReport identity_suite(const KernelEvaluator& ev1, const KernelEvaluator& ev2,
                              const PointQuad& q);

}  // namespace arch
