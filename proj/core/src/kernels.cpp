#include "arch/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace arch {

namespace {

constexpr double kDividedDifferenceSwitch = 1e-6;

std::vector<cplx> conv1(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  std::vector<cplx> out(a.size() + b.size() - 1, cplx(0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

Matrix conv2(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows() - 1, a.cols() + b.cols() - 1);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index p = 0; p < b.rows(); ++p)
        for (Eigen::Index q = 0; q < b.cols(); ++q) out(i + p, j + q) += a(i, j) * b(p, q);
  return out;
}

std::vector<cplx> with_monic_top(const NodePolynomial& p) {
  std::vector<cplx> full = p.coeffs;
  full.push_back(1.0);
  return full;
}

}  // namespace

KernelEvaluator KernelEvaluator::from_archipelago(ArchipelagoSpec arch, double guard) {
  if (guard < 1.0) throw std::invalid_argument("KernelEvaluator: guard factor must be >= 1");
  KernelEvaluator ev;
  ev.use_disks_ = true;
  ev.r0_ = arch.bounding_radius;
  ev.guard_ = guard;
  auto [P, Q] = defining_data(arch);
  ev.P_ = std::move(P);
  ev.Q_ = std::move(Q);
  ev.disks_ = std::move(arch.disks);
  return ev;
}

KernelEvaluator KernelEvaluator::from_raw(NodePolynomial P, HermitianPolynomialKernel Q,
                                          double bounding_radius, double guard) {
  if (guard < 1.0) throw std::invalid_argument("KernelEvaluator: guard factor must be >= 1");
  if (Q.degree() != P.degree())
    throw std::invalid_argument("KernelEvaluator: deg Q must equal deg P");
  KernelEvaluator ev;
  ev.use_disks_ = false;
  ev.P_ = std::move(P);
  ev.Q_ = std::move(Q);
  ev.r0_ = bounding_radius;
  ev.guard_ = guard;
  return ev;
}

KernelEvaluator KernelEvaluator::empty(double guard) {
  KernelEvaluator ev;
  ev.use_disks_ = true;
  ev.r0_ = 0.0;
  ev.guard_ = guard;
  ev.P_ = NodePolynomial{};
  ev.Q_ = HermitianPolynomialKernel{Matrix::Constant(1, 1, cplx(1.0))};
  return ev;
}

KernelEvaluator KernelEvaluator::product(const KernelEvaluator& a, const KernelEvaluator& b) {
  const double guard = std::max(a.guard_, b.guard_);
  if (a.use_disks_ && b.use_disks_) {
    KernelEvaluator ev;
    ev.use_disks_ = true;
    ev.disks_ = a.disks_;
    ev.disks_.insert(ev.disks_.end(), b.disks_.begin(), b.disks_.end());
    ev.r0_ = std::max(a.r0_, b.r0_);
    ev.guard_ = guard;
    if (!ev.disks_.empty()) {
      ArchipelagoSpec spec{ev.disks_, ev.r0_};
      auto [P, Q] = defining_data(spec);
      ev.P_ = std::move(P);
      ev.Q_ = std::move(Q);
    } else {
      ev.Q_ = HermitianPolynomialKernel{Matrix::Constant(1, 1, cplx(1.0))};
    }
    return ev;
  }
  NodePolynomial P;
  auto pc = conv1(with_monic_top(a.P_), with_monic_top(b.P_));
  P.coeffs.assign(pc.begin(), pc.end() - 1);
  HermitianPolynomialKernel Q{conv2(a.Q_.coeffs, b.Q_.coeffs)};
  return from_raw(std::move(P), std::move(Q), std::max(a.r0_, b.r0_), guard);
}

void KernelEvaluator::require_guarded(cplx p) const {
  if (std::abs(p) < guard_radius() - 1e-12)
    throw std::domain_error("kernel argument inside the guarded region |z| < guard * R0");
}

cplx KernelEvaluator::eval(cplx w, cplx z) const {
  const cplx zb = std::conj(z);
  if (use_disks_) {
    cplx e = 1.0;
    for (const auto& d : disks_)
      e *= 1.0 - d.radius * d.radius / ((w - d.center) * (zb - std::conj(d.center)));
    return e;
  }
  return Q_.eval(w, z) / (P_.eval(w) * std::conj(P_.eval(z)));
}

cplx KernelEvaluator::eval_dw(cplx w, cplx z) const {
  const cplx zb = std::conj(z);
  if (use_disks_) {
    // E = prod E_j, dE/dw = E * sum (dE_j/dw)/E_j with dE_j/dw = phi_j/(w-a).
    cplx e = 1.0, sum = 0.0;
    for (const auto& d : disks_) {
      const cplx dw = w - d.center, dz = zb - std::conj(d.center);
      const cplx phi = d.radius * d.radius / (dw * dz);
      const cplx ej = 1.0 - phi;
      e *= ej;
      sum += phi / (dw * ej);
    }
    return e * sum;
  }
  const cplx pw = P_.eval(w), pz = std::conj(P_.eval(z));
  return (Q_.eval_dw(w, z) * pw - Q_.eval(w, z) * P_.eval_derivative(w)) / (pw * pw * pz);
}

cplx KernelEvaluator::eval_dzbar(cplx w, cplx z) const {
  const cplx zb = std::conj(z);
  if (use_disks_) {
    cplx e = 1.0, sum = 0.0;
    for (const auto& d : disks_) {
      const cplx dw = w - d.center, dz = zb - std::conj(d.center);
      const cplx phi = d.radius * d.radius / (dw * dz);
      const cplx ej = 1.0 - phi;
      e *= ej;
      sum += phi / (dz * ej);
    }
    return e * sum;
  }
  const cplx pw = P_.eval(w), pz = std::conj(P_.eval(z));
  const cplx pzp = std::conj(P_.eval_derivative(z));
  return (Q_.eval_dzbar(w, z) * pz - Q_.eval(w, z) * pzp) / (pw * pz * pz);
}

cplx KernelEvaluator::eval_dwdzbar(cplx w, cplx z) const {
  const cplx zb = std::conj(z);
  if (use_disks_) {
    // Product rule: E (S_w S_z + sum_j [(d2E_j E_j - dwE_j dzE_j)/E_j^2])
    // with the per-factor combination collapsing to -phi_j/((w-a)(zb-ab)E_j^2).
    cplx e = 1.0, sw = 0.0, sz = 0.0, scross = 0.0;
    for (const auto& d : disks_) {
      const cplx dw = w - d.center, dz = zb - std::conj(d.center);
      const cplx phi = d.radius * d.radius / (dw * dz);
      const cplx ej = 1.0 - phi;
      e *= ej;
      sw += phi / (dw * ej);
      sz += phi / (dz * ej);
      scross += -phi / (dw * dz * ej * ej);
    }
    return e * (sw * sz + scross);
  }
  const cplx pw = P_.eval(w), pz = std::conj(P_.eval(z));
  const cplx pwp = P_.eval_derivative(w), pzp = std::conj(P_.eval_derivative(z));
  const cplx q = Q_.eval(w, z);
  const cplx qw = Q_.eval_dw(w, z), qz = Q_.eval_dzbar(w, z), qwz = Q_.eval_dwdzbar(w, z);
  return (qwz * pw * pz - qw * pw * pzp - qz * pwp * pz + q * pwp * pzp) / (pw * pw * pz * pz);
}

cplx exp_transform(const KernelEvaluator& ev, cplx w, cplx z) {
  ev.require_guarded(w);
  ev.require_guarded(z);
  return ev.eval(w, z);
}

namespace {

double slot_scale(cplx a, cplx b) { return std::max({1.0, std::abs(a), std::abs(b)}); }

// Divided difference in the analytic slot: (E(v,y) - E(w,y))/(v - w),
// replaced by the derivative at the midpoint when v ~ w.
cplx dd_first(const KernelEvaluator& ev, cplx v, cplx w, cplx y) {
  if (std::abs(v - w) < kDividedDifferenceSwitch * slot_scale(v, w))
    return ev.eval_dw(0.5 * (v + w), y);
  return (ev.eval(v, y) - ev.eval(w, y)) / (v - w);
}

// Divided difference in the anti-analytic slot: (E(x,z) - E(x,u))/(zb - ub).
cplx dd_second(const KernelEvaluator& ev, cplx x, cplx z, cplx u) {
  if (std::abs(z - u) < kDividedDifferenceSwitch * slot_scale(z, u))
    return ev.eval_dzbar(x, 0.5 * (z + u));
  return (ev.eval(x, z) - ev.eval(x, u)) / (std::conj(z) - std::conj(u));
}

// Double divided difference E([v,w],[z,u]).
cplx dd_both(const KernelEvaluator& ev, cplx v, cplx w, cplx z, cplx u) {
  const bool first_small = std::abs(v - w) < kDividedDifferenceSwitch * slot_scale(v, w);
  const bool second_small = std::abs(z - u) < kDividedDifferenceSwitch * slot_scale(z, u);
  if (first_small && second_small)
    return ev.eval_dwdzbar(0.5 * (v + w), 0.5 * (z + u));
  if (first_small) {
    const cplx m = 0.5 * (v + w);
    return (ev.eval_dw(m, z) - ev.eval_dw(m, u)) / (std::conj(z) - std::conj(u));
  }
  return (dd_second(ev, v, z, u) - dd_second(ev, w, z, u)) / (v - w);
}

void require_quad_guarded(const KernelEvaluator& ev, const PointQuad& q) {
  ev.require_guarded(q.w);
  ev.require_guarded(q.z);
  ev.require_guarded(q.u);
  ev.require_guarded(q.v);
}

}  // namespace

cplx kernel_L_divided_difference(const KernelEvaluator& ev, const PointQuad& q) {
  require_quad_guarded(ev, q);
  const cplx ewu = ev.eval(q.w, q.u);
  if (std::abs(ewu) == 0.0) throw std::domain_error("kernel_L: E(w,u) = 0");
  const cplx a = dd_both(ev, q.v, q.w, q.z, q.u);   // E([v,w],[z,u])
  const cplx b = dd_second(ev, q.w, q.z, q.u);      // E(w,[z,u])
  const cplx c = dd_first(ev, q.v, q.w, q.u);       // E([v,w],u)
  return -(a * ewu - b * c) / ewu;
}

cplx kernel_L(const KernelEvaluator& ev, const PointQuad& q) {
  require_quad_guarded(ev, q);
  const bool first_small =
      std::abs(q.v - q.w) < kDividedDifferenceSwitch * slot_scale(q.v, q.w);
  const bool second_small =
      std::abs(q.z - q.u) < kDividedDifferenceSwitch * slot_scale(q.z, q.u);
  if (first_small || second_small) return kernel_L_divided_difference(ev, q);

  const cplx ewu = ev.eval(q.w, q.u);
  if (std::abs(ewu) == 0.0) throw std::domain_error("kernel_L: E(w,u) = 0");
  const cplx num = ev.eval(q.v, q.z) * ewu - ev.eval(q.w, q.z) * ev.eval(q.v, q.u);
  return num / ((q.v - q.w) * (std::conj(q.u) - std::conj(q.z)) * ewu);
}

cplx kernel_L_disk_closed(const DiskSpec& d, const PointQuad& q) {
  const cplx ab = std::conj(d.center);
  const cplx dw = q.w - d.center, dz = std::conj(q.z) - ab;
  const cplx dv = q.v - d.center, du = std::conj(q.u) - ab;
  const double r2 = d.radius * d.radius;
  const cplx denom_factor = 1.0 - r2 / (dw * du);
  if (std::abs(denom_factor) == 0.0)
    throw std::domain_error("kernel_L_disk_closed: pole at (w-a)(conj u - conj a) = r^2");
  return r2 / (dw * dz * dv * du) / denom_factor;
}

cplx antidiagonal_L(const KernelEvaluator& ev, cplx w, cplx z) {
  ev.require_guarded(w);
  ev.require_guarded(z);
  if (ev.has_disks()) {
    // E * sum_j r_j^2 / ((w-a_j)^2 (zb-ab_j)^2 E_j^2)
    const cplx zb = std::conj(z);
    cplx e = 1.0, sum = 0.0;
    for (const auto& d : ev.disks()) {
      const cplx dw = w - d.center, dz = zb - std::conj(d.center);
      const cplx ej = 1.0 - d.radius * d.radius / (dw * dz);
      e *= ej;
      sum += d.radius * d.radius / (dw * dw * dz * dz * ej * ej);
    }
    return e * sum;
  }
  const cplx e = ev.eval(w, z);
  if (std::abs(e) == 0.0) throw std::domain_error("antidiagonal_L: E(w,z) = 0");
  // -E d/dw[(dE/dzbar)/E] = -(d2E * E - dzbarE * dwE)/E
  return -(ev.eval_dwdzbar(w, z) * e - ev.eval_dzbar(w, z) * ev.eval_dw(w, z)) / e;
}

std::pair<cplx, cplx> kernel_M_N(const KernelEvaluator& ev, cplx w, cplx z) {
  ev.require_guarded(w);
  ev.require_guarded(z);
  const cplx e = ev.eval(w, z);
  if (std::abs(e) == 0.0) throw std::domain_error("kernel_M_N: E(w,z) = 0");
  return {1.0 - e, 1.0 / e - 1.0};
}

double IdentityReport::max_residual() const {
  return std::max({merging1, merging3, merging5, n_product});
}

IdentityReport identity_suite(const KernelEvaluator& ev1, const KernelEvaluator& ev2,
                              const PointQuad& q) {
  const KernelEvaluator uni = KernelEvaluator::product(ev1, ev2);
  require_quad_guarded(uni, q);

  const cplx L = kernel_L(uni, q);
  const cplx L1 = kernel_L(ev1, q);
  const cplx L2 = kernel_L(ev2, q);
  const cplx e1_vz = ev1.eval(q.v, q.z), e2_vz = ev2.eval(q.v, q.z);
  const cplx e1_wu = ev1.eval(q.w, q.u), e2_wu = ev2.eval(q.w, q.u);
  const cplx e1_wz = ev1.eval(q.w, q.z);
  const cplx e1_vu = ev1.eval(q.v, q.u);
  const cplx e_wu = uni.eval(q.w, q.u);
  const cplx dd = (q.v - q.w) * (std::conj(q.u) - std::conj(q.z));

  IdentityReport rep;
  rep.merging1 = std::abs(L - (L1 * e2_vz + L2 * e1_vz - dd * L1 * L2));
  rep.merging3 = std::abs(L - (L1 * e2_vz + e1_wz * e1_vu / e1_wu * L2));
  rep.merging5 = std::abs(L * e_wu - ((L1 * e1_wu) * e2_vz * e2_wu + (L2 * e2_wu) * e1_wz * e1_vu));

  // Product rule for the resolvent Gram kernel: 1 + N = (1+N1)(1+N2),
  // i.e. multiplicativity of 1/E, checked at (w, z).
  const cplx e_wz = uni.eval(q.w, q.z), e1 = ev1.eval(q.w, q.z), e2 = ev2.eval(q.w, q.z);
  rep.n_product = std::abs(1.0 / e_wz - (1.0 / e1) * (1.0 / e2));

  const double eww = uni.eval(q.w, q.w).real();
  const double ezz = uni.eval(q.z, q.z).real();
  rep.reverse_cauchy_schwarz = std::norm(e_wz) - eww * ezz;
  return rep;
}

}  // namespace arch
