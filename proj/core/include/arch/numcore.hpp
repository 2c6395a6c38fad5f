#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

namespace arch {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Spectral summary of a hermitian (or nearly hermitian) matrix.
/// psd is true iff min_eig >= -tolerance * max(1, spectral radius).
struct EigReport {
  std::vector<double> eigenvalues;  // ascending
  double min_eig = 0.0;
  double spectral_radius = 0.0;
  double tolerance = 0.0;
  bool psd = false;
};

/// (m + m*)/2 — absorbs round-off asymmetry deterministically.
Matrix hermitize(const Matrix& m);

bool is_hermitian(const Matrix& m, double tol = 1e-12);

/// Eigenvalues of the hermitized average, ascending, with the relative
/// PSD verdict. Throws std::invalid_argument on empty or non-finite input.
EigReport herm_min_eig(const Matrix& m, double tol);

/// Hermitian PSD square root; eigenvalues below tol are clamped to zero.
/// Throws std::domain_error if m fails the PSD check at tolerance tol.
Matrix psd_sqrt(const Matrix& m, double tol);

/// Smallest C >= 0 with C*g_den - g_num >= -tol, computed by generalized
/// eigenvalues restricted to the numerical range of g_den. Returns nullopt
/// when g_num has a component outside the range of g_den exceeding tol.
std::optional<double> generalized_scale_bound(const Matrix& g_num,
                                              const Matrix& g_den,
                                              double tol);

/// Largest singular value (dense; sizes here are tiny).
double operator_norm(const Matrix& m);

}  // namespace arch
