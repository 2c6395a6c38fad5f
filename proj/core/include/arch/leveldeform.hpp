#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "arch/numcore.hpp"

namespace arch {

/// The defining quartic of the two disks D(-1, sqrt 2), D(1, sqrt 2):
/// Q(z, conj z) = |z|^4 - 4|z|^2 - 2 Re(z^2) + 1. Real by construction.
double eval_Q(cplx z);

/// Gradient of Q as a function on R^2.
std::pair<double, double> grad_Q(cplx z);

/// Integer density g_t on an n x n grid over [-x_max, x_max]^2:
/// 1 where Q < t, 2 on the bounded component of {Q > t} containing the
/// origin (the hole), 0 elsewhere.
struct DensityField {
  int n = 0;
  double x_max = 0.0;
  double t = 0.0;
  bool t_supported = true;  // t in [0, 1]
  std::vector<std::uint8_t> values;  // row-major, index iy * n + ix

  double cell_size() const { return 2.0 * x_max / n; }
  double cell_area() const { return cell_size() * cell_size(); }
  double x_at(int ix) const { return -x_max + (ix + 0.5) * cell_size(); }
  double y_at(int iy) const { return -x_max + (iy + 0.5) * cell_size(); }
  std::uint8_t at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * n + ix]; }
  double mass() const;  // sum of values times cell area
  long hole_cells() const;
};
DensityField density_field(double t, int n, double x_max);

/// CSV rows "x,y,value".
std::string density_to_csv(const DensityField& field);

/// The four branch points of the level-t Schwarz function sit at
/// +-iA (inside the hole) and +-iB, roots of z^4 + (2+t) z^2 + (1-t).
/// For t <= 0 the pairs fuse at +-i (A = B = 1); for t >= 1 the inner
/// pair has fused at the origin (A = 0).
struct BranchPoints {
  double inner_A = 0.0;
  double outer_B = 0.0;
  bool fused = false;  // t outside (0, 1)
};
BranchPoints branch_points(double t);

/// Both values of S_t(z) = (2z +- sqrt((z^2+1)^2 + t(z^2-1)))/(z^2 - 1),
/// principal branch first (continued from large positive real z, where the
/// principal branch tends to +1 like (z+1)/(z-1)). Throws near the poles
/// z = +-1 and within 1e-6 of the branch cuts on the imaginary axis.
std::pair<cplx, cplx> schwarz_branches(double t, cplx z);

/// count points on the outer boundary of {Q < t}, found by radial bisection.
std::vector<cplx> levelset_outer_boundary(double t, int count, double x_max = 2.6);

enum class HarmonicTag { One, Z, Z2, Z3, ReZ2 };
const char* harmonic_tag_name(HarmonicTag tag);

struct QuadratureCheckReport {
  double t = 0.0;
  std::string h;
  int n = 0;
  cplx lhs{0.0, 0.0};
  cplx rhs{0.0, 0.0};
  double abs_err = 0.0;
  double rel_err = 0.0;  // relative to the mass scale 4*pi
};

/// Midpoint-rule check of  integral h g_t dxdy = 2 pi (h(-1) + h(1))
/// for harmonic test functions.
QuadratureCheckReport quadrature_identity_check(double t, HarmonicTag h, int n,
                                                double x_max = 2.6);

/// Same with a custom polynomial h(z) = sum coeffs[k] z^k (complex
/// polynomials in z are harmonic).
QuadratureCheckReport quadrature_identity_check(double t, std::span<const cplx> coeffs, int n,
                                                double x_max = 2.6);

}  // namespace arch
