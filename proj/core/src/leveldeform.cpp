#include "arch/leveldeform.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace arch {

double eval_Q(cplx z) {
  const double r2 = std::norm(z);
  const double re_z2 = z.real() * z.real() - z.imag() * z.imag();
  return r2 * r2 - 4.0 * r2 - 2.0 * re_z2 + 1.0;
}

std::pair<double, double> grad_Q(cplx z) {
  const double r2 = std::norm(z);
  return {4.0 * z.real() * (r2 - 3.0), 4.0 * z.imag() * (r2 - 1.0)};
}

double DensityField::mass() const {
  long total = 0;
  for (std::uint8_t v : values) total += v;
  return static_cast<double>(total) * cell_area();
}

long DensityField::hole_cells() const {
  long count = 0;
  for (std::uint8_t v : values) count += (v == 2);
  return count;
}

DensityField density_field(double t, int n, double x_max) {
  if (n < 256) throw std::invalid_argument("density_field: n must be >= 256");
  if (x_max < 1.0 + std::numbers::sqrt2)
    throw std::invalid_argument("density_field: x_max must cover the disks (>= 1 + sqrt 2)");

  DensityField field;
  field.n = n;
  field.x_max = x_max;
  field.t = t;
  field.t_supported = t >= 0.0 && t <= 1.0;
  field.values.assign(static_cast<std::size_t>(n) * n, 0);

  for (int iy = 0; iy < n; ++iy) {
    const double y = field.y_at(iy);
    for (int ix = 0; ix < n; ++ix) {
      const cplx z(field.x_at(ix), y);
      if (eval_Q(z) < t) field.values[static_cast<std::size_t>(iy) * n + ix] = 1;
    }
  }

  // Hole: the bounded component of {Q > t} containing the origin. It is
  // contained in the intersection of the two disks for 0 <= t <= 1, and
  // restricting the fill there keeps it bounded across the pinch points
  // at t = 0 where the two circles cross.
  const auto in_lens = [&](int ix, int iy) {
    const cplx z(field.x_at(ix), field.y_at(iy));
    return std::norm(z - cplx(1.0, 0.0)) < 2.0 && std::norm(z + cplx(1.0, 0.0)) < 2.0;
  };
  const int ox = n / 2, oy = n / 2;  // cell containing (or adjacent to) the origin
  const auto idx = [n](int ix, int iy) { return static_cast<std::size_t>(iy) * n + ix; };
  if (field.values[idx(ox, oy)] == 0 && in_lens(ox, oy)) {
    std::deque<std::pair<int, int>> queue{{ox, oy}};
    field.values[idx(ox, oy)] = 2;
    while (!queue.empty()) {
      const auto [cx, cy] = queue.front();
      queue.pop_front();
      const int nb[4][2] = {{cx + 1, cy}, {cx - 1, cy}, {cx, cy + 1}, {cx, cy - 1}};
      for (const auto& [px, py] : nb) {
        if (px < 0 || py < 0 || px >= n || py >= n) continue;
        if (field.values[idx(px, py)] != 0) continue;
        if (!in_lens(px, py)) continue;
        field.values[idx(px, py)] = 2;
        queue.push_back({px, py});
      }
    }
  }
  return field;
}

std::string density_to_csv(const DensityField& field) {
  std::ostringstream out;
  out.precision(12);
  out << "x,y,value\n";
  for (int iy = 0; iy < field.n; ++iy)
    for (int ix = 0; ix < field.n; ++ix)
      out << field.x_at(ix) << ',' << field.y_at(iy) << ',' << int(field.at(ix, iy)) << '\n';
  return out.str();
}

BranchPoints branch_points(double t) {
  BranchPoints bp;
  bp.fused = !(t > 0.0 && t < 1.0);
  const double tc = std::clamp(t, 0.0, 1.0);
  const double s = std::sqrt(tc * (tc + 8.0));
  bp.inner_A = std::sqrt(std::max(0.0, (2.0 + tc - s) / 2.0));
  bp.outer_B = std::sqrt((2.0 + tc + s) / 2.0);
  return bp;
}

namespace {

cplx radical_arg(double t, cplx z) {
  const cplx z2 = z * z;
  return (z2 + 1.0) * (z2 + 1.0) + t * (z2 - 1.0);
}

// Analytic continuation of sqrt(radical_arg) along a segment, starting
// from a known value at the segment start.
cplx continue_sqrt(double t, cplx from, cplx to, cplx start_value, int steps) {
  cplx prev = start_value;
  for (int s = 1; s <= steps; ++s) {
    const cplx p = from + (to - from) * (static_cast<double>(s) / steps);
    const cplx r = std::sqrt(radical_arg(t, p));
    prev = (std::abs(r - prev) <= std::abs(-r - prev)) ? r : -r;
  }
  return prev;
}

}  // namespace

std::pair<cplx, cplx> schwarz_branches(double t, cplx z) {
  const cplx den = z * z - 1.0;
  if (std::abs(den) < 1e-12) throw std::domain_error("schwarz_branches: pole at z = +-1");

  const BranchPoints bp = branch_points(t);
  if (std::abs(z.real()) < 1e-6) {
    const double ay = std::abs(z.imag());
    if (ay <= bp.inner_A + 1e-6 || ay >= bp.outer_B - 1e-6)
      throw std::domain_error("schwarz_branches: point too close to a branch cut");
  }

  cplx radical;
  if (t <= 1e-12) {
    radical = z * z + 1.0;  // double roots, globally single-valued
  } else {
    const double x0 = std::max({4.0, 2.0 * std::abs(z), 2.0 * bp.outer_B + 1.0});
    const cplx start(x0, 0.0);
    const cplx start_value = std::sqrt(radical_arg(t, start));  // ~ +(x0^2+1)
    if (z.real() >= 0.0) {
      radical = continue_sqrt(t, start, z, start_value, 256);
    } else {
      const double gap = 0.5 * (bp.inner_A + bp.outer_B);
      const double h = (z.imag() >= 0.0 ? gap : -gap);
      const cplx p1(x0, h), p2(z.real(), h);
      cplx val = continue_sqrt(t, start, p1, start_value, 256);
      val = continue_sqrt(t, p1, p2, val, 512);
      radical = continue_sqrt(t, p2, z, val, 256);
    }
  }
  return {(2.0 * z + radical) / den, (2.0 * z - radical) / den};
}

std::vector<cplx> levelset_outer_boundary(double t, int count, double x_max) {
  if (count < 1) throw std::invalid_argument("levelset_outer_boundary: count must be >= 1");
  std::vector<cplx> pts;
  pts.reserve(static_cast<std::size_t>(count));
  const int coarse = 2000;
  for (int k = 0; k < count; ++k) {
    const double theta = 2.0 * std::numbers::pi * (k + 0.5) / count;
    const cplx dir = std::polar(1.0, theta);
    // Outermost crossing of Q = t along the ray: scan inward from x_max.
    double r_hi = x_max, r_lo = -1.0;
    for (int s = 1; s <= coarse; ++s) {
      const double r = x_max * (1.0 - static_cast<double>(s) / coarse);
      if (r <= 0.0) break;
      if (eval_Q(r * dir) < t) {
        r_lo = r;
        r_hi = x_max * (1.0 - static_cast<double>(s - 1) / coarse);
        break;
      }
    }
    if (r_lo < 0.0) continue;  // ray misses the domain (possible only at t = 0)
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (r_lo + r_hi);
      (eval_Q(mid * dir) < t ? r_lo : r_hi) = mid;
    }
    pts.push_back(0.5 * (r_lo + r_hi) * dir);
  }
  return pts;
}

const char* harmonic_tag_name(HarmonicTag tag) {
  switch (tag) {
    case HarmonicTag::One: return "1";
    case HarmonicTag::Z: return "z";
    case HarmonicTag::Z2: return "z2";
    case HarmonicTag::Z3: return "z3";
    case HarmonicTag::ReZ2: return "rez2";
  }
  return "?";
}

namespace {

QuadratureCheckReport run_quadrature_check(double t, int n, double x_max, const std::string& name,
                                           const std::function<cplx(cplx)>& h, cplx rhs) {
  if (t < 0.0 || t > 1.0)
    throw std::invalid_argument("quadrature_identity_check: t must lie in [0, 1]");
  const DensityField field = density_field(t, n, x_max);
  cplx lhs = 0.0;
  for (int iy = 0; iy < n; ++iy) {
    const double y = field.y_at(iy);
    cplx row = 0.0;
    for (int ix = 0; ix < n; ++ix) {
      const std::uint8_t g = field.at(ix, iy);
      if (g == 0) continue;
      row += static_cast<double>(g) * h(cplx(field.x_at(ix), y));
    }
    lhs += row;
  }
  lhs *= field.cell_area();

  QuadratureCheckReport rep;
  rep.t = t;
  rep.h = name;
  rep.n = n;
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.abs_err = std::abs(lhs - rhs);
  rep.rel_err = rep.abs_err / (4.0 * std::numbers::pi);
  return rep;
}

}  // namespace

QuadratureCheckReport quadrature_identity_check(double t, HarmonicTag tag, int n, double x_max) {
  const double two_pi = 2.0 * std::numbers::pi;
  switch (tag) {
    case HarmonicTag::One:
      return run_quadrature_check(t, n, x_max, "1", [](cplx) { return cplx(1.0); },
                                  cplx(2.0 * two_pi));
    case HarmonicTag::Z:
      return run_quadrature_check(t, n, x_max, "z", [](cplx z) { return z; }, cplx(0.0));
    case HarmonicTag::Z2:
      return run_quadrature_check(t, n, x_max, "z2", [](cplx z) { return z * z; },
                                  cplx(2.0 * two_pi));
    case HarmonicTag::Z3:
      return run_quadrature_check(t, n, x_max, "z3", [](cplx z) { return z * z * z; }, cplx(0.0));
    case HarmonicTag::ReZ2:
      return run_quadrature_check(t, n, x_max, "rez2",
                                  [](cplx z) { return cplx((z * z).real()); }, cplx(2.0 * two_pi));
  }
  throw std::invalid_argument("quadrature_identity_check: unknown harmonic tag");
}

QuadratureCheckReport quadrature_identity_check(double t, std::span<const cplx> coeffs, int n,
                                                double x_max) {
  if (coeffs.empty())
    throw std::invalid_argument("quadrature_identity_check: empty polynomial");
  const auto h = [coeffs](cplx z) {
    cplx acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
  };
  const cplx rhs = 2.0 * std::numbers::pi * (h(cplx(-1.0)) + h(cplx(1.0)));
  return run_quadrature_check(t, n, x_max, "custom", h, rhs);
}

}  // namespace arch
