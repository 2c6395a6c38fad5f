#include "arch/numcore.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace arch {

Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

namespace {

void require_finite_square(const Matrix& m, const char* who) {
  if (m.rows() == 0 || m.rows() != m.cols())
    throw std::invalid_argument(std::string(who) + ": matrix must be square and non-empty");
  if (!m.allFinite())
    throw std::invalid_argument(std::string(who) + ": non-finite entries");
}

}  // namespace

EigReport herm_min_eig(const Matrix& m, double tol) {
  require_finite_square(m, "herm_min_eig");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(m), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("herm_min_eig: eigendecomposition failed");
  EigReport rep;
  const auto& ev = es.eigenvalues();  // ascending
  rep.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  rep.min_eig = rep.eigenvalues.front();
  rep.spectral_radius = std::max(std::abs(rep.eigenvalues.front()), std::abs(rep.eigenvalues.back()));
  rep.tolerance = tol;
  rep.psd = rep.min_eig >= -tol * std::max(1.0, rep.spectral_radius);
  return rep;
}

Matrix psd_sqrt(const Matrix& m, double tol) {
  require_finite_square(m, "psd_sqrt");
  const Matrix h = hermitize(m);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("psd_sqrt: eigendecomposition failed");
  const auto& ev = es.eigenvalues();
  const double radius = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  if (ev(0) < -tol * std::max(1.0, radius))
    throw std::domain_error("psd_sqrt: matrix is not positive semidefinite");
  Eigen::VectorXd roots(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    roots(i) = ev(i) < tol ? 0.0 : std::sqrt(ev(i));
  Matrix s = es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
  return hermitize(s);
}

std::optional<double> generalized_scale_bound(const Matrix& g_num,
                                              const Matrix& g_den,
                                              double tol) {
  require_finite_square(g_num, "generalized_scale_bound");
  require_finite_square(g_den, "generalized_scale_bound");
  if (g_num.rows() != g_den.rows())
    throw std::invalid_argument("generalized_scale_bound: dimension mismatch");

  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(g_den));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("generalized_scale_bound: eigendecomposition failed");
  const auto& lam = es.eigenvalues();
  const double lam_max = lam(lam.size() - 1);
  if (lam(0) < -tol * std::max(1.0, std::abs(lam_max)))
    throw std::domain_error("generalized_scale_bound: g_den is not PSD");

  // Rank cut relative to g_den's own scale, so small-norm Grams keep their
  // genuine trailing directions.
  const double rank_cut = std::max(tol, 1e-14) * std::max(lam_max, 0.0);
  std::vector<Eigen::Index> range_idx, kernel_idx;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    (lam(i) > rank_cut ? range_idx : kernel_idx).push_back(i);

  const Matrix hn = hermitize(g_num);
  const double num_scale = std::max(hn.cwiseAbs().maxCoeff(), 1e-300);

  double candidate = 0.0;
  if (!range_idx.empty()) {
    Matrix V(g_den.rows(), static_cast<Eigen::Index>(range_idx.size()));
    Eigen::VectorXd inv_sqrt(static_cast<Eigen::Index>(range_idx.size()));
    for (std::size_t j = 0; j < range_idx.size(); ++j) {
      V.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(range_idx[j]);
      inv_sqrt(static_cast<Eigen::Index>(j)) = 1.0 / std::sqrt(lam(range_idx[j]));
    }
    const Matrix A = inv_sqrt.asDiagonal() * (V.adjoint() * hn * V) * inv_sqrt.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> es2(hermitize(A), Eigen::EigenvaluesOnly);
    candidate = std::max(0.0, es2.eigenvalues()(es2.eigenvalues().size() - 1));
  }

  if (!kernel_idx.empty()) {
    Matrix K(g_den.rows(), static_cast<Eigen::Index>(kernel_idx.size()));
    for (std::size_t j = 0; j < kernel_idx.size(); ++j)
      K.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(kernel_idx[j]);
    Eigen::SelfAdjointEigenSolver<Matrix> esk(hermitize(K.adjoint() * hn * K),
                                              Eigen::EigenvaluesOnly);
    const double outside = std::max(std::abs(esk.eigenvalues()(0)),
                                    std::abs(esk.eigenvalues()(esk.eigenvalues().size() - 1)));
    // Energy below the rank cut is dominated by C * g_den there, so allow it
    // up to the candidate bound before declaring the ranges incompatible.
    if (outside > tol * num_scale + 2.0 * candidate * rank_cut) return std::nullopt;
  }
  return candidate;
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(m.adjoint() * m), Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues()(es.eigenvalues().size() - 1)));
}

}  // namespace arch
