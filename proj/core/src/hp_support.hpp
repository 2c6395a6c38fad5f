// Internal high-precision arithmetic for the block-matrix recurrence.
// The recurrence is a saddle-point iteration: forward round-off grows by a
// configuration-dependent factor each step, so deep runs need working
// precision well beyond double. Not installed; used by chain.cpp only.
#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "arch/numcore.hpp"

namespace arch::hp {

inline thread_local mpfr_prec_t g_precision = 256;

struct PrecisionScope {
  mpfr_prec_t saved;
  explicit PrecisionScope(mpfr_prec_t bits) : saved(g_precision) { g_precision = bits; }
  ~PrecisionScope() { g_precision = saved; }
};

class Real {
 public:
  Real() { mpfr_init2(v_, g_precision); mpfr_set_zero(v_, 1); }
  Real(double d) {  // NOLINT: implicit by design
    mpfr_init2(v_, g_precision);
    mpfr_set_d(v_, d, MPFR_RNDN);
  }
  Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real(Real&& o) noexcept { mpfr_init2(v_, 2); mpfr_swap(v_, o.v_); }
  Real& operator=(const Real& o) {
    if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  friend Real operator+(const Real& a, const Real& b) { Real r; mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator-(const Real& a, const Real& b) { Real r; mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator*(const Real& a, const Real& b) { Real r; mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator/(const Real& a, const Real& b) { Real r; mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  Real operator-() const { Real r; mpfr_neg(r.v_, v_, MPFR_RNDN); return r; }
  Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }

  static Real sqrt(const Real& a) { Real r; mpfr_sqrt(r.v_, a.v_, MPFR_RNDN); return r; }
  static Real abs(const Real& a) { Real r; mpfr_abs(r.v_, a.v_, MPFR_RNDN); return r; }
  static Real hypot(const Real& a, const Real& b) { Real r; mpfr_hypot(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  static Real max(const Real& a, const Real& b) { return a < b ? b : a; }

 private:
  mpfr_t v_;
};

struct Complex {
  Real re, im;

  Complex() = default;
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Complex(double r) : re(r), im(0.0) {}  // NOLINT
  explicit Complex(const cplx& z) : re(z.real()), im(z.imag()) {}

  cplx to_cplx() const { return {re.to_double(), im.to_double()}; }
  Complex conj() const { return {re, -im}; }
  Real abs() const { return Real::hypot(re, im); }
  Real norm() const { return re * re + im * im; }

  friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator*(const Real& a, const Complex& b) { return {a * b.re, a * b.im}; }
  friend Complex operator/(const Complex& a, const Real& d) { return {a.re / d, a.im / d}; }
  friend Complex operator/(const Complex& a, const Complex& b) {
    const Real n = b.norm();
    const Complex num = a * b.conj();
    return {num.re / n, num.im / n};
  }
  Complex operator-() const { return {-re, -im}; }
  Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
  Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
};

struct Mat {
  int rows = 0, cols = 0;
  std::vector<Complex> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}
  Complex& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  const Complex& at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Complex(1.0);
    return m;
  }
  static Mat from(const Matrix& e) {
    Mat m(static_cast<int>(e.rows()), static_cast<int>(e.cols()));
    for (int i = 0; i < m.rows; ++i)
      for (int j = 0; j < m.cols; ++j) m.at(i, j) = Complex(e(i, j));
    return m;
  }
  Matrix to_eigen() const {
    Matrix e(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) e(i, j) = at(i, j).to_cplx();
    return e;
  }
  Mat adjoint() const {
    Mat m(cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m.at(j, i) = at(i, j).conj();
    return m;
  }
  friend Mat operator*(const Mat& x, const Mat& y) {
    Mat m(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i) {
      for (int k = 0; k < x.cols; ++k) {
        const Complex& xik = x.at(i, k);
        for (int j = 0; j < y.cols; ++j) m.at(i, j) += xik * y.at(k, j);
      }
    }
    return m;
  }
  friend Mat operator-(const Mat& x, const Mat& y) {
    Mat m(x.rows, x.cols);
    for (std::size_t i = 0; i < m.a.size(); ++i) m.a[i] = x.a[i] - y.a[i];
    return m;
  }
  friend Mat operator+(const Mat& x, const Mat& y) {
    Mat m(x.rows, x.cols);
    for (std::size_t i = 0; i < m.a.size(); ++i) m.a[i] = x.a[i] + y.a[i];
    return m;
  }
  Mat hermitized() const {
    Mat m(rows, cols);
    const Real half(0.5);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m.at(i, j) = half * (at(i, j) + at(j, i).conj());
    return m;
  }
  Real trace_real() const {
    Real t(0.0);
    for (int i = 0; i < rows; ++i) t += at(i, i).re;
    return t;
  }
};

struct EigenSystem {
  std::vector<Real> values;  // ascending
  Mat vectors;               // columns
};

// Cyclic Jacobi for hermitian matrices: each 2x2 pivot block is phased to a
// real symmetric block and annihilated by the classical rotation.
inline EigenSystem jacobi_hermitian(const Mat& input) {
  const int n = input.rows;
  Mat A = input.hermitized();
  Mat V = Mat::identity(n);

  Real scale(0.0);
  for (int i = 0; i < n; ++i) scale = Real::max(scale, Real::abs(A.at(i, i).re));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) scale = Real::max(scale, A.at(i, j).abs());
  Real stop = scale;
  {
    // 2^-(prec-8) relative off-diagonal target
    Real eps(1.0);
    for (mpfr_prec_t b = 0; b + 8 < g_precision; ++b) eps = eps * Real(0.5);
    stop = Real::max(scale * eps, Real(0.0));
  }

  for (int sweep = 0; sweep < 128; ++sweep) {
    Real off(0.0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off = Real::max(off, A.at(i, j).abs());
    if (off <= stop) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const Real apq_abs = A.at(p, q).abs();
        if (apq_abs <= stop) continue;
        const Complex u = A.at(p, q) / apq_abs;  // phase
        const Real tau = (A.at(q, q).re - A.at(p, p).re) / (Real(2.0) * apq_abs);
        Real t = Real(1.0) / (Real::abs(tau) + Real::sqrt(Real(1.0) + tau * tau));
        if (tau < Real(0.0)) t = -t;
        const Real c = Real(1.0) / Real::sqrt(Real(1.0) + t * t);
        const Real s = t * c;

        // G = [[c, s], [-s conj(u), c conj(u)]] in the (p, q) plane;
        // the phase u makes the pivot block real symmetric first.
        for (int i = 0; i < n; ++i) {
          const Complex aip = A.at(i, p), aiq = A.at(i, q);
          A.at(i, p) = c * aip - s * (u.conj() * aiq);
          A.at(i, q) = s * aip + c * (u.conj() * aiq);
        }
        for (int j = 0; j < n; ++j) {
          const Complex apj = A.at(p, j), aqj = A.at(q, j);
          A.at(p, j) = c * apj - s * (u * aqj);
          A.at(q, j) = s * apj + c * (u * aqj);
        }
        A.at(p, q) = Complex(0.0);
        A.at(q, p) = Complex(0.0);
        A.at(p, p).im = Real(0.0);
        A.at(q, q).im = Real(0.0);
        for (int i = 0; i < n; ++i) {
          const Complex vip = V.at(i, p), viq = V.at(i, q);
          V.at(i, p) = c * vip - s * (u.conj() * viq);
          V.at(i, q) = s * vip + c * (u.conj() * viq);
        }
      }
    }
  }

  EigenSystem sys;
  sys.values.reserve(static_cast<std::size_t>(n));
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return A.at(x, x).re < A.at(y, y).re; });
  sys.vectors = Mat(n, n);
  for (int j = 0; j < n; ++j) {
    sys.values.push_back(A.at(order[static_cast<std::size_t>(j)], order[static_cast<std::size_t>(j)]).re);
    for (int i = 0; i < n; ++i) sys.vectors.at(i, j) = V.at(i, order[static_cast<std::size_t>(j)]);
  }
  return sys;
}

// Solve X * V = W for X (least squares via the Gram of V's rows when V is
// wide/rank-deficient; V is r x d with r <= d and full row rank here).
inline Mat solve_right(const Mat& V, const Mat& W) {
  // X = W V^* (V V^*)^{-1}; the r x r Gram is solved by Gaussian elimination.
  const Mat Vh = V.adjoint();
  const Mat G = V * Vh;  // r x r hermitian positive definite
  const Mat Rhs = W * Vh;
  const int r = G.rows;
  // Augmented elimination: G^T columns... solve G X^T = Rhs^T column-wise.
  Mat A = G;
  Mat B = Rhs.adjoint();  // r x r; we solve A Y = B, then X = Y^*
  std::vector<int> perm(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (int col = 0; col < r; ++col) {
    int piv = col;
    Real best = A.at(col, col).abs();
    for (int i = col + 1; i < r; ++i) {
      const Real v = A.at(i, col).abs();
      if (best < v) { best = v; piv = i; }
    }
    if (piv != col) {
      for (int j = 0; j < r; ++j) std::swap(A.at(col, j), A.at(piv, j));
      for (int j = 0; j < B.cols; ++j) std::swap(B.at(col, j), B.at(piv, j));
    }
    for (int i = col + 1; i < r; ++i) {
      const Complex f = A.at(i, col) / A.at(col, col);
      for (int j = col; j < r; ++j) A.at(i, j) -= f * A.at(col, j);
      for (int j = 0; j < B.cols; ++j) B.at(i, j) -= f * B.at(col, j);
    }
  }
  Mat Y(r, B.cols);
  for (int j = 0; j < B.cols; ++j) {
    for (int i = r - 1; i >= 0; --i) {
      Complex acc = B.at(i, j);
      for (int k = i + 1; k < r; ++k) acc -= A.at(i, k) * Y.at(k, j);
      Y.at(i, j) = acc / A.at(i, i);
    }
  }
  return Y.adjoint();
}

}  // namespace arch::hp
