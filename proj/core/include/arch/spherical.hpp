#pragma once

#include <string>

#include "arch/domains.hpp"

namespace arch {

/// A point of the extended plane; infinity is first-class in this module
/// so that sphere rotations stay total.
struct ExtendedComplex {
  cplx value{0.0, 0.0};
  bool infinite = false;

  static ExtendedComplex inf() { return {cplx(0.0, 0.0), true}; }
  static ExtendedComplex at(cplx z) { return {z, false}; }
};

/// Rigid rotation of the Riemann sphere: z -> (a z + b) / (-conj(b) z + conj(a)).
struct MobiusTransform {
  cplx a{1.0, 0.0};
  cplx b{0.0, 0.0};

  MobiusTransform compose(const MobiusTransform& inner) const;
};

/// Throws std::invalid_argument when a = b = 0.
ExtendedComplex mobius_apply(const MobiusTransform& m, ExtendedComplex z);

/// w-map (z + i)/(z - i), sending the circle crossing points +-i to 0, inf.
MobiusTransform intersection_w_map();

/// Rotation moving p to the origin: z -> (z - p)/(conj(p) z + 1).
MobiusTransform mobius_to_zero(cplx p);

/// Chordal distance on the unit sphere (antipodal points are at distance 2).
double chordal_distance(ExtendedComplex z1, ExtendedComplex z2);

/// Spherical area of a disk under the form 4 dxdy / (1 + |z|^2)^2.
/// Closed form 4 pi r^2 / (1 + r^2) for centered disks; off-center disks are
/// moved by a rigid rotation taking the disk's spherical balance point to 0
/// (radius transported through three boundary points), then cross-checked by
/// direct polar-grid integration of the area form with n nodes per direction.
struct SphericalAreaReport {
  std::string region;
  double closed_form = 0.0;
  double numeric = 0.0;
  double abs_err = 0.0;
};
SphericalAreaReport spherical_area(const DiskSpec& d, int n = 512);

/// Residuals of the half-plane geometry of the two extremal disks
/// D(+-1, sqrt 2): the w-map sends their boundary circles onto the lines
/// Re w = +- Im w, the spherical areas sum (with multiplicity) to 4 pi, and
/// z = sqrt(2) - 1 is the balance point of D(1, sqrt 2) sitting on the
/// boundary of the other disk.
struct HalfplaneCheckReport {
  double line_residual = 0.0;           // max over both circles' samples
  double area_sum = 0.0;                // expected 4 pi
  double area_sum_err = 0.0;
  double geodesic_membership_err = 0.0; // | |(sqrt2-1) - (-1)| - sqrt2 |
  double u_map_zero_err = 0.0;          // |u(sqrt2 - 1)|
  bool u_map_infinity_ok = false;       // u(-1 - sqrt2) = infinity
};
HalfplaneCheckReport orthogonal_halfplane_check(int n = 256);

}  // namespace arch
