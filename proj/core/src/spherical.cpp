#include "arch/spherical.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace arch {

MobiusTransform MobiusTransform::compose(const MobiusTransform& inner) const {
  // Matrix product of the defining coefficient matrices; the rigid form
  // [[a, b], [-conj b, conj a]] is closed under composition.
  return {a * inner.a - b * std::conj(inner.b), a * inner.b + b * std::conj(inner.a)};
}

ExtendedComplex mobius_apply(const MobiusTransform& m, ExtendedComplex z) {
  if (std::norm(m.a) + std::norm(m.b) == 0.0)
    throw std::invalid_argument("mobius_apply: a and b cannot both vanish");
  if (z.infinite) {
    if (std::abs(m.b) == 0.0) return ExtendedComplex::inf();
    return ExtendedComplex::at(m.a / (-std::conj(m.b)));
  }
  const cplx num = m.a * z.value + m.b;
  const cplx den = -std::conj(m.b) * z.value + std::conj(m.a);
  const double scale = std::abs(m.b * z.value) + std::abs(m.a);
  if (std::abs(den) <= 1e-13 * scale) return ExtendedComplex::inf();
  return ExtendedComplex::at(num / den);
}

MobiusTransform intersection_w_map() {
  // (z + i)/(z - i), a rotation since (a, b) = (e^{i pi/4}, i e^{i pi/4}).
  const cplx a = std::polar(1.0, std::numbers::pi / 4.0);
  return {a, cplx(0.0, 1.0) * a};
}

MobiusTransform mobius_to_zero(cplx p) { return {cplx(1.0, 0.0), -p}; }

double chordal_distance(ExtendedComplex z1, ExtendedComplex z2) {
  if (z1.infinite && z2.infinite) return 0.0;
  if (z1.infinite) return 2.0 / std::sqrt(1.0 + std::norm(z2.value));
  if (z2.infinite) return 2.0 / std::sqrt(1.0 + std::norm(z1.value));
  return 2.0 * std::abs(z1.value - z2.value) /
         std::sqrt((1.0 + std::norm(z1.value)) * (1.0 + std::norm(z2.value)));
}

namespace {

double centered_area(double r) { return 4.0 * std::numbers::pi * r * r / (1.0 + r * r); }

// Spherical balance point of the disk: the root of
//   A x^2 + (r^2 - A^2 + 1) x - A = 0,   A = |a|,
// lying inside the disk, taken along the ray through the center. Its
// sphere-antipode is the other root; the pair is mirror-symmetric in the
// boundary circle, so the rotation moving it to 0 centers the image disk.
cplx balance_point(const DiskSpec& d) {
  const double A = std::abs(d.center);
  if (A < 1e-14) return {0.0, 0.0};
  const double beta = d.radius * d.radius - A * A + 1.0;
  const double disc = std::sqrt(beta * beta + 4.0 * A * A);
  const double x_pos = (-beta + disc) / (2.0 * A);
  const double x_neg = (-beta - disc) / (2.0 * A);
  const cplx dir = d.center / A;
  const double inside = std::abs(x_pos - A) < d.radius ? x_pos : x_neg;
  return inside * dir;
}

double transported_radius(const DiskSpec& d, const MobiusTransform& m) {
  double r_image = -1.0;
  for (int k = 0; k < 3; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / 3.0 + 0.19;
    const cplx zb = d.center + d.radius * std::polar(1.0, theta);
    const auto img = mobius_apply(m, ExtendedComplex::at(zb));
    if (img.infinite) throw std::runtime_error("transported_radius: boundary maps to infinity");
    const double r_k = std::abs(img.value);
    if (r_image < 0.0) {
      r_image = r_k;
    } else if (std::abs(r_k - r_image) > 1e-10 * (1.0 + r_image)) {
      throw std::runtime_error("transported_radius: image circle is not centered");
    }
  }
  return r_image;
}

double polar_grid_area(const DiskSpec& d, int n) {
  // Smooth integrand over [0, 2pi] x [0, r]: periodic trapezoid in the
  // angle, composite Simpson in the radius.
  const int n_theta = n;
  const int n_rad = (n % 2 == 0) ? n : n + 1;
  const double dr = d.radius / n_rad;
  double total = 0.0;
  for (int j = 0; j < n_theta; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / n_theta;
    const cplx dir = std::polar(1.0, theta);
    double radial = 0.0;
    for (int i = 0; i <= n_rad; ++i) {
      const double s = i * dr;
      const double f = 4.0 * s / std::pow(1.0 + std::norm(d.center + s * dir), 2);
      const double wgt = (i == 0 || i == n_rad) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      radial += wgt * f;
    }
    total += radial * dr / 3.0;
  }
  return total * 2.0 * std::numbers::pi / n_theta;
}

}  // namespace

SphericalAreaReport spherical_area(const DiskSpec& d, int n) {
  if (n < 512) throw std::invalid_argument("spherical_area: n must be >= 512 for the numeric path");
  SphericalAreaReport rep;
  {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "D(%g%+gi, %g)", d.center.real(), d.center.imag(), d.radius);
    rep.region = buf;
  }
  if (std::abs(d.center) < 1e-14) {
    rep.closed_form = centered_area(d.radius);
  } else {
    const MobiusTransform move = mobius_to_zero(balance_point(d));
    rep.closed_form = centered_area(transported_radius(d, move));
  }
  rep.numeric = polar_grid_area(d, n);
  rep.abs_err = std::abs(rep.numeric - rep.closed_form);
  return rep;
}

HalfplaneCheckReport orthogonal_halfplane_check(int n) {
  if (n < 100) throw std::invalid_argument("orthogonal_halfplane_check: n must be >= 100");
  const double sqrt2 = std::numbers::sqrt2;
  const DiskSpec right{cplx(1.0, 0.0), sqrt2};
  const DiskSpec left{cplx(-1.0, 0.0), sqrt2};
  const MobiusTransform w = intersection_w_map();

  HalfplaneCheckReport rep;
  for (int k = 0; k < n; ++k) {
    const double theta = 2.0 * std::numbers::pi * (k + 0.31) / n;
    const cplx zr = right.center + right.radius * std::polar(1.0, theta);
    const cplx zl = left.center + left.radius * std::polar(1.0, theta);
    const auto wr = mobius_apply(w, ExtendedComplex::at(zr));
    const auto wl = mobius_apply(w, ExtendedComplex::at(zl));
    // dD(+1, sqrt2) lands on Re w = Im w, dD(-1, sqrt2) on Re w = -Im w.
    if (!wr.infinite)
      rep.line_residual = std::max(rep.line_residual,
                                   std::abs(wr.value.real() - wr.value.imag()) /
                                       (1.0 + std::abs(wr.value)));
    if (!wl.infinite)
      rep.line_residual = std::max(rep.line_residual,
                                   std::abs(wl.value.real() + wl.value.imag()) /
                                       (1.0 + std::abs(wl.value)));
  }

  const int grid = std::max(512, n);
  rep.area_sum = spherical_area(right, grid).closed_form + spherical_area(left, grid).closed_form;
  rep.area_sum_err = std::abs(rep.area_sum - 4.0 * std::numbers::pi);

  const double p = sqrt2 - 1.0;
  rep.geodesic_membership_err = std::abs(std::abs(p - (-1.0)) - sqrt2);
  const MobiusTransform u = mobius_to_zero(p);
  const auto u0 = mobius_apply(u, ExtendedComplex::at(cplx(p, 0.0)));
  rep.u_map_zero_err = u0.infinite ? 1.0 : std::abs(u0.value);
  const auto uinf = mobius_apply(u, ExtendedComplex::at(cplx(-1.0 - sqrt2, 0.0)));
  rep.u_map_infinity_ok = uinf.infinite;
  return rep;
}

}  // namespace arch
