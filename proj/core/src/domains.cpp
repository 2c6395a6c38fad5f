#include "arch/domains.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace arch {

using json = nlohmann::json;

cplx NodePolynomial::eval(cplx w) const {
  cplx acc = 1.0;  // monic top
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * w + *it;
  return acc;
}

cplx NodePolynomial::eval_derivative(cplx w) const {
  const int d = degree();
  cplx acc = static_cast<double>(d);
  for (int k = d - 1; k >= 1; --k) acc = acc * w + static_cast<double>(k) * coeffs[k];
  return d == 0 ? cplx(0.0) : acc;
}

cplx HermitianPolynomialKernel::eval(cplx w, cplx z) const {
  const cplx zb = std::conj(z);
  cplx acc = 0.0;
  for (Eigen::Index j = coeffs.rows() - 1; j >= 0; --j) {
    cplx row = 0.0;
    for (Eigen::Index k = coeffs.cols() - 1; k >= 0; --k) row = row * zb + coeffs(j, k);
    acc = acc * w + row;
  }
  return acc;
}

double HermitianPolynomialKernel::eval_diagonal(cplx z) const { return eval(z, z).real(); }

cplx HermitianPolynomialKernel::eval_dw(cplx w, cplx z) const {
  const cplx zb = std::conj(z);
  cplx acc = 0.0;
  for (Eigen::Index j = coeffs.rows() - 1; j >= 1; --j) {
    cplx row = 0.0;
    for (Eigen::Index k = coeffs.cols() - 1; k >= 0; --k) row = row * zb + coeffs(j, k);
    acc = acc * w + static_cast<double>(j) * row;
  }
  return acc;
}

cplx HermitianPolynomialKernel::eval_dzbar(cplx w, cplx z) const {
  const cplx zb = std::conj(z);
  cplx acc = 0.0;
  for (Eigen::Index k = coeffs.cols() - 1; k >= 1; --k) {
    cplx col = 0.0;
    for (Eigen::Index j = coeffs.rows() - 1; j >= 0; --j) col = col * w + coeffs(j, k);
    acc = acc * zb + static_cast<double>(k) * col;
  }
  return acc;
}

cplx HermitianPolynomialKernel::eval_dwdzbar(cplx w, cplx z) const {
  const cplx zb = std::conj(z);
  cplx acc = 0.0;
  for (Eigen::Index j = coeffs.rows() - 1; j >= 1; --j) {
    cplx row = 0.0;
    for (Eigen::Index k = coeffs.cols() - 1; k >= 1; --k)
      row = row * zb + static_cast<double>(k) * coeffs(j, k);
    acc = acc * w + static_cast<double>(j) * row;
  }
  return acc;
}

ArchipelagoSpec make_archipelago(const std::vector<std::pair<cplx, double>>& disks) {
  if (disks.empty()) throw std::invalid_argument("make_archipelago: empty disk list");
  ArchipelagoSpec spec;
  spec.disks.reserve(disks.size());
  for (const auto& [center, radius] : disks) {
    if (!(radius > 0.0) || !std::isfinite(radius) || !std::isfinite(std::abs(center)))
      throw std::invalid_argument("make_archipelago: radius must be positive and finite");
    spec.disks.push_back({center, radius});
    spec.bounding_radius = std::max(spec.bounding_radius, std::abs(center) + radius);
  }
  return spec;
}

namespace {

// Multiply the coefficient matrix by one disk factor
// (w - a)(zbar - conj a) - r^2, i.e. a 2x2 kernel.
Matrix convolve_disk_factor(const Matrix& c, const DiskSpec& d) {
  Matrix f(2, 2);
  f(0, 0) = d.center * std::conj(d.center) - d.radius * d.radius;
  f(0, 1) = -d.center;
  f(1, 0) = -std::conj(d.center);
  f(1, 1) = 1.0;
  Matrix out = Matrix::Zero(c.rows() + 1, c.cols() + 1);
  for (Eigen::Index j = 0; j < c.rows(); ++j)
    for (Eigen::Index k = 0; k < c.cols(); ++k)
      for (Eigen::Index p = 0; p < 2; ++p)
        for (Eigen::Index q = 0; q < 2; ++q) out(j + p, k + q) += c(j, k) * f(p, q);
  return out;
}

}  // namespace

std::pair<NodePolynomial, HermitianPolynomialKernel> defining_data(const ArchipelagoSpec& arch) {
  if (arch.disks.empty()) throw std::invalid_argument("defining_data: empty archipelago");
  // P by 1D convolution of the monic factors (w - a_j).
  std::vector<cplx> p{1.0};
  for (const auto& d : arch.disks) {
    std::vector<cplx> next(p.size() + 1, cplx(0.0));
    for (std::size_t k = 0; k < p.size(); ++k) {
      next[k + 1] += p[k];
      next[k] += -d.center * p[k];
    }
    p = std::move(next);
  }
  NodePolynomial P;
  P.coeffs.assign(p.begin(), p.end() - 1);  // drop the implicit monic top

  Matrix c = Matrix::Constant(1, 1, cplx(1.0));
  for (const auto& d : arch.disks) c = convolve_disk_factor(c, d);
  return {P, HermitianPolynomialKernel{std::move(c)}};
}

cplx schwarz_disk(const DiskSpec& d, cplx z) {
  const cplx dz = z - d.center;
  if (std::abs(dz) == 0.0) throw std::domain_error("schwarz_disk: pole at the disk center");
  return std::conj(d.center) + d.radius * d.radius / dz;
}

std::vector<cplx> polynomial_roots(const NodePolynomial& p) {
  const int d = p.degree();
  if (d == 0) return {};
  Matrix companion = Matrix::Zero(d, d);
  for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) companion(i, d - 1) = -p.coeffs[i];
  Eigen::ComplexEigenSolver<Matrix> es(companion, /*computeEigenvectors=*/false);
  std::vector<cplx> roots(es.eigenvalues().data(), es.eigenvalues().data() + d);
  return roots;
}

namespace {

json parse_or_throw(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw std::invalid_argument("malformed JSON input");
  return j;
}

cplx complex_from_json(const json& v) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw std::invalid_argument("complex values must be [re, im] pairs");
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

ArchipelagoSpec archipelago_from_json(const std::string& text) {
  const json j = parse_or_throw(text);
  if (!j.is_object() || !j.contains("disks") || !j["disks"].is_array())
    throw std::invalid_argument("archipelago JSON must be {\"disks\":[...]}");
  std::vector<std::pair<cplx, double>> disks;
  for (const auto& dj : j["disks"]) {
    if (!dj.contains("cx") || !dj.contains("cy") || !dj.contains("r"))
      throw std::invalid_argument("each disk needs cx, cy, r");
    disks.emplace_back(cplx(dj["cx"].get<double>(), dj["cy"].get<double>()), dj["r"].get<double>());
  }
  return make_archipelago(disks);
}

std::string archipelago_to_json(const ArchipelagoSpec& arch) {
  json disks = json::array();
  for (const auto& d : arch.disks)
    disks.push_back({{"cx", d.center.real()}, {"cy", d.center.imag()}, {"r", d.radius}});
  return json{{"disks", disks}}.dump();
}

RawQuadratureData raw_pq_from_json(const std::string& text) {
  const json j = parse_or_throw(text);
  if (!j.is_object() || !j.contains("P") || !j.contains("Q"))
    throw std::invalid_argument("raw quadrature input must contain P and Q");

  std::vector<cplx> pfull;
  for (const auto& v : j["P"]) pfull.push_back(complex_from_json(v));
  if (pfull.size() < 2) throw std::invalid_argument("P must have degree >= 1");
  if (std::abs(pfull.back() - cplx(1.0)) > 1e-12)
    throw std::invalid_argument("P must be monic (top coefficient 1)");
  NodePolynomial P;
  P.coeffs.assign(pfull.begin(), pfull.end() - 1);

  const auto& qj = j["Q"];
  const auto n = qj.size();
  if (n != pfull.size())
    throw std::invalid_argument("Q must be (d+1) x (d+1) for deg P = d");
  Matrix Q(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    if (qj[r].size() != n) throw std::invalid_argument("Q rows must have equal length");
    for (std::size_t c = 0; c < n; ++c) Q(r, c) = complex_from_json(qj[r][c]);
  }
  if (!is_hermitian(Q)) throw std::invalid_argument("Q must be hermitian: c(j,k) = conj(c(k,j))");
  if (std::abs(Q(Q.rows() - 1, Q.cols() - 1) - cplx(1.0)) > 1e-12)
    throw std::invalid_argument("Q top coefficient c(d,d) must equal 1");
  return {std::move(P), HermitianPolynomialKernel{std::move(Q)}};
}

}  // namespace arch
