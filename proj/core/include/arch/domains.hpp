#pragma once

#include <string>
#include <utility>
#include <vector>

#include "arch/numcore.hpp"

namespace arch {

/// Open disk D(a, r) carrying uniform area measure; quadrature node a
/// with weight pi*r^2.
struct DiskSpec {
  cplx center;
  double radius = 0.0;
};

/// A finite family of "islands" (disks here) whose pairwise area-measure
/// overlap is the question.
struct ArchipelagoSpec {
  std::vector<DiskSpec> disks;
  double bounding_radius = 0.0;  // R0 = max(|a_j| + r_j)
};

/// Minimal monic polynomial vanishing at the quadrature nodes.
/// P(w) = w^d + coeffs[d-1] w^{d-1} + ... + coeffs[0]; degree d = coeffs.size().
struct NodePolynomial {
  std::vector<cplx> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()); }
  cplx eval(cplx w) const;
  cplx eval_derivative(cplx w) const;
};

/// Hermitian polynomial kernel Q(w, z) = sum_{j,k} c(j,k) w^j conj(z)^k.
/// For defining kernels the top coefficient c(d,d) equals 1 and the diagonal
/// Q(z,z) is negative exactly on the open domain.
struct HermitianPolynomialKernel {
  Matrix coeffs;  // (d+1) x (d+1), row = w-degree, col = zbar-degree

  int degree() const { return static_cast<int>(coeffs.rows()) - 1; }
  cplx eval(cplx w, cplx z) const;          // Q(w, z), conjugating z
  double eval_diagonal(cplx z) const;       // Q(z, z), real up to round-off
  cplx eval_dw(cplx w, cplx z) const;       // d/dw
  cplx eval_dzbar(cplx w, cplx z) const;    // d/d(zbar)
  cplx eval_dwdzbar(cplx w, cplx z) const;  // mixed second derivative
};

/// Validates the disk list and records the bounding radius R0.
/// Throws std::invalid_argument on an empty list or a non-positive radius.
ArchipelagoSpec make_archipelago(const std::vector<std::pair<cplx, double>>& disks);

/// Node polynomial P(w) = prod (w - a_j) and defining kernel
/// Q(w,z) = prod ((w - a_j)(conj z - conj a_j) - r_j^2), expanded by
/// repeated convolution in the exact order of the input list.
std::pair<NodePolynomial, HermitianPolynomialKernel> defining_data(const ArchipelagoSpec& arch);

/// Schwarz function of the circle |z - a| = r: S(z) = conj(a) + r^2/(z - a).
/// Throws std::domain_error at the pole z = a.
cplx schwarz_disk(const DiskSpec& d, cplx z);

/// Roots of the monic polynomial via the companion matrix.
std::vector<cplx> polynomial_roots(const NodePolynomial& p);

/// JSON schema: {"disks":[{"cx":r,"cy":r,"r":r},...]}
ArchipelagoSpec archipelago_from_json(const std::string& text);
std::string archipelago_to_json(const ArchipelagoSpec& arch);

/// Raw quadrature-domain input {"P":[[re,im],...],"Q":[[[re,im],...],...]}.
/// P lists monic coefficients low-to-high including the top 1; validation is
/// limited to hermitian symmetry and the monic top term.
struct RawQuadratureData {
  NodePolynomial P;
  HermitianPolynomialKernel Q;
};
RawQuadratureData raw_pq_from_json(const std::string& text);

}  // namespace arch
