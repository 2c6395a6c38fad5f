#include "arch/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hp_support.hpp"

namespace arch {

namespace {

constexpr double kConditionLimit = 1e12;

// The recurrence amplifies perturbations by a configuration-dependent
// factor each step, so the working precision scales with the step budget.
mpfr_prec_t chain_precision(int K) {
  return std::max<mpfr_prec_t>(256, 8 * static_cast<mpfr_prec_t>(K) + 128);
}

struct HpSeedBuild {
  SeedStatus status = SeedStatus::Ok;
  double offending_eigenvalue = 0.0;
  int d = 0, r = 0;
  hp::Mat coeff;  // d x d hermitian
  hp::Mat V;      // r x d
  hp::Mat D0;     // r x r
  hp::Mat xi;     // r x 1
};

// Pivoted outer-product Cholesky: c = V* V, rows of V from successive
// pivot columns; stops at the numerical rank.
hp::Mat hp_pivoted_cholesky(const hp::Mat& c, double rank_tol) {
  const int d = c.rows;
  hp::Mat R = c;
  double scale = 1.0;
  for (int i = 0; i < d; ++i) scale = std::max(scale, R.at(i, i).re.to_double());
  std::vector<std::vector<hp::Complex>> rows;
  for (int s = 0; s < d; ++s) {
    int piv = 0;
    for (int j = 1; j < d; ++j)
      if (R.at(piv, piv).re < R.at(j, j).re) piv = j;
    if (R.at(piv, piv).re.to_double() <= rank_tol * scale) break;
    const hp::Real root = hp::Real::sqrt(R.at(piv, piv).re);
    std::vector<hp::Complex> ell(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) ell[static_cast<std::size_t>(i)] = R.at(i, piv) / root;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        R.at(i, j) -= ell[static_cast<std::size_t>(i)] * ell[static_cast<std::size_t>(j)].conj();
    rows.push_back(std::move(ell));
  }
  hp::Mat V(static_cast<int>(rows.size()), d);
  for (int s = 0; s < V.rows; ++s)
    for (int j = 0; j < d; ++j) V.at(s, j) = rows[static_cast<std::size_t>(s)][static_cast<std::size_t>(j)].conj();
  return V;
}

HpSeedBuild build_hp_seed(const NodePolynomial& P, const HermitianPolynomialKernel& Q,
                          double tol) {
  const int d = P.degree();
  if (d < 1) throw std::invalid_argument("sos_seed: deg P must be >= 1");
  if (Q.degree() != d) throw std::invalid_argument("sos_seed: deg Q must equal deg P");
  if (std::abs(Q.coeffs(d, d) - cplx(1.0)) > 1e-9)
    throw std::invalid_argument("sos_seed: Q top coefficient must be 1");

  HpSeedBuild out;
  out.d = d;

  // conj(P(z)) P(w) - Q(w, z) as a coefficient matrix.
  std::vector<hp::Complex> pfull;
  pfull.reserve(static_cast<std::size_t>(d) + 1);
  for (int k = 0; k < d; ++k) pfull.emplace_back(P.coeffs[static_cast<std::size_t>(k)]);
  pfull.emplace_back(cplx(1.0));
  hp::Mat diff(d + 1, d + 1);
  for (int j = 0; j <= d; ++j)
    for (int k = 0; k <= d; ++k)
      diff.at(j, k) = pfull[static_cast<std::size_t>(j)] * pfull[static_cast<std::size_t>(k)].conj() -
                      hp::Complex(Q.coeffs(j, k));

  // Degrees d in either variable must cancel for an SOS of degree <= d-1.
  double edge_scale = 1.0;
  for (int j = 0; j <= d; ++j)
    for (int k = 0; k <= d; ++k)
      edge_scale = std::max(edge_scale, diff.at(j, k).abs().to_double());
  for (int j = 0; j <= d; ++j) {
    if (diff.at(j, d).abs().to_double() > 1e-9 * edge_scale ||
        diff.at(d, j).abs().to_double() > 1e-9 * edge_scale) {
      out.status = SeedStatus::DegenerateSeed;
      return out;
    }
  }
  hp::Mat c(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) c.at(j, k) = diff.at(j, k);
  c = c.hermitized();
  out.coeff = c;

  const auto eig = hp::jacobi_hermitian(c);
  const double lam_min = eig.values.front().to_double();
  const double lam_max = eig.values.back().to_double();
  const double radius = std::max(std::abs(lam_min), std::abs(lam_max));
  if (lam_min < -tol * std::max(1.0, radius)) {
    out.status = SeedStatus::NotPsd;
    out.offending_eigenvalue = lam_min;
    return out;
  }

  hp::Mat V = hp_pivoted_cholesky(c, tol);
  const int r = V.rows;
  if (r == 0) {
    out.status = SeedStatus::DegenerateSeed;
    return out;
  }
  out.r = r;

  hp::Mat xi(r, 1);
  for (int i = 0; i < r; ++i) xi.at(i, 0) = -V.at(i, d - 1);
  // D0* v_k = v_{k-1} + conj(p_k) xi, k = 0..d-1, v_{-1} = 0.
  hp::Mat W(r, d);
  for (int k = 0; k < d; ++k) {
    const hp::Complex pk(std::conj(P.coeffs[static_cast<std::size_t>(k)]));
    for (int i = 0; i < r; ++i) {
      W.at(i, k) = pk * xi.at(i, 0);
      if (k > 0) W.at(i, k) += V.at(i, k - 1);
    }
  }
  const hp::Mat D0star = hp::solve_right(V, W);
  const hp::Mat resid = D0star * V - W;
  double resid_max = 0.0, w_max = 1.0;
  for (const auto& e : resid.a) resid_max = std::max(resid_max, e.abs().to_double());
  for (const auto& e : W.a) w_max = std::max(w_max, e.abs().to_double());
  if (resid_max > 1e-8 * w_max) {
    out.status = SeedStatus::DegenerateSeed;
    return out;
  }

  out.V = std::move(V);
  out.D0 = D0star.adjoint();
  out.xi = std::move(xi);
  return out;
}

}  // namespace

SeedResult sos_seed(const NodePolynomial& P, const HermitianPolynomialKernel& Q, double tol) {
  hp::PrecisionScope scope(256);
  HpSeedBuild built = build_hp_seed(P, Q, tol);
  if (built.status != SeedStatus::Ok)
    return {built.status, built.offending_eigenvalue, std::nullopt};

  SeedData seed;
  seed.degree = built.d;
  seed.dim = built.r;
  seed.coeff = built.coeff.to_eigen();
  seed.V = built.V.to_eigen();
  seed.D0 = built.D0.to_eigen();
  seed.xi = built.xi.to_eigen().col(0);
  seed.P = P;
  seed.Q = Q;
  return {SeedStatus::Ok, 0.0, std::move(seed)};
}

const char* chain_failure_name(ChainFailure mode) {
  switch (mode) {
    case ChainFailure::None: return "NONE";
    case ChainFailure::ASquaredNotPsd: return "A_SQUARED_NOT_PSD";
    case ChainFailure::ASingular: return "A_SINGULAR";
    case ChainFailure::NormBlowup: return "NORM_BLOWUP";
  }
  return "?";
}

namespace {

double hp_operator_norm(const hp::Mat& m) {
  const auto eig = hp::jacobi_hermitian(m.adjoint() * m);
  return std::sqrt(std::max(0.0, eig.values.back().to_double()));
}

}  // namespace

ChainRun chain_run(const SeedData& seed, int K, double tol, double norm_cap) {
  if (K < 0) throw std::invalid_argument("chain_run: K must be >= 0");
  hp::PrecisionScope scope(chain_precision(K));

  // Rebuild the seed at the precision this run needs; the double fields in
  // SeedData are display mirrors of the same deterministic construction.
  HpSeedBuild built = build_hp_seed(seed.P, seed.Q, tol);
  if (built.status != SeedStatus::Ok)
    throw std::invalid_argument("chain_run: seed does not reproduce from its defining data");

  ChainRun run;
  run.xi = built.xi.to_eigen().col(0);

  hp::Mat A_prev_sq = built.xi * built.xi.adjoint();
  hp::Mat D = built.D0;

  for (int k = 0; k < K; ++k) {
    const hp::Mat commutator = D.adjoint() * D - D * D.adjoint();
    const hp::Mat A_sq = (A_prev_sq - commutator).hermitized();

    const auto eig = hp::jacobi_hermitian(A_sq);
    const double lam_min = eig.values.front().to_double();
    const double lam_max = eig.values.back().to_double();
    const double radius = std::max(std::abs(lam_min), std::abs(lam_max));

    if (lam_min < -tol * std::max(1.0, radius)) {
      run.report = {false, k, k + 1, ChainFailure::ASquaredNotPsd, A_sq.to_eigen()};
      run.final_D = D.to_eigen();
      return run;
    }
    if (!(lam_max > 0.0) || lam_max / std::max(lam_min, 0.0) > kConditionLimit * kConditionLimit) {
      run.report = {false, k, k + 1, ChainFailure::ASingular, A_sq.to_eigen()};
      run.final_D = D.to_eigen();
      return run;
    }

    const int r = A_sq.rows;
    hp::Mat sq(r, r), inv_sq(r, r);
    for (int i = 0; i < r; ++i) {
      const hp::Real lam = eig.values[static_cast<std::size_t>(i)];
      const hp::Real clamped_up = hp::Real::max(lam, hp::Real(tol));
      const hp::Real clamped_dn = hp::Real::max(lam, hp::Real(0.0));
      sq.at(i, i) = hp::Complex(hp::Real::sqrt(clamped_dn), hp::Real(0.0));
      inv_sq.at(i, i) = hp::Complex(hp::Real(1.0) / hp::Real::sqrt(clamped_up), hp::Real(0.0));
    }
    const hp::Mat A = (eig.vectors * sq * eig.vectors.adjoint()).hermitized();
    const hp::Mat A_inv = eig.vectors * inv_sq * eig.vectors.adjoint();
    const hp::Mat D_next = A_inv * D * A;

    ChainState st;
    st.step = k;
    st.D = D.to_eigen();
    st.A = A.to_eigen();
    st.norm_D = hp_operator_norm(D);
    st.min_eig_A2 = lam_min;
    st.trace_A2 = A_sq.trace_real().to_double();
    run.history.push_back(std::move(st));

    if (hp_operator_norm(D_next) > norm_cap) {
      run.report = {false, k + 1, k + 1, ChainFailure::NormBlowup, D_next.to_eigen()};
      run.final_D = D_next.to_eigen();
      run.report.steps_run = static_cast<int>(run.history.size());
      return run;
    }
    A_prev_sq = A_sq;
    D = D_next;
  }
  run.final_D = D.to_eigen();
  run.report.certified = true;
  run.report.steps_run = static_cast<int>(run.history.size());
  run.report.mode = ChainFailure::None;
  return run;
}

ChainOutcome run_chain_for(const NodePolynomial& P, const HermitianPolynomialKernel& Q,
                           int K, double tol, double norm_cap) {
  ChainOutcome out;
  out.seed = sos_seed(P, Q, tol);
  if (out.seed.status == SeedStatus::Ok)
    out.run = chain_run(*out.seed.seed, K, tol, norm_cap);
  return out;
}

std::vector<double> two_disk_threshold_table(int k_max) {
  if (k_max < 3) throw std::invalid_argument("two_disk_threshold_table: k_max must be >= 3");
  const auto survives = [](double a, int k) {
    const auto arch = make_archipelago({{cplx(-a, 0.0), 1.0}, {cplx(a, 0.0), 1.0}});
    const auto [P, Q] = defining_data(arch);
    const auto seeded = sos_seed(P, Q, 1e-12);
    if (seeded.status != SeedStatus::Ok) return false;
    if (k == 0) return true;
    // No norm cap here: intermediate D_k may legitimately spike near the
    // positivity boundary, and the bisected quantity is the PSD threshold.
    return chain_run(*seeded.seed, k, 1e-12, std::numeric_limits<double>::infinity())
        .report.certified;
  };

  std::vector<double> thresholds;
  thresholds.reserve(static_cast<std::size_t>(k_max));
  for (int k = 0; k < k_max; ++k) {
    double lo = 0.5, hi = 1.05;
    for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
      const double mid = 0.5 * (lo + hi);
      (survives(mid, k) ? hi : lo) = mid;
    }
    thresholds.push_back(0.5 * (lo + hi));
  }
  return thresholds;
}

TruncatedOperator assemble_truncated(const ChainRun& run, int K) {
  if (K < 0 || static_cast<std::size_t>(K) > run.history.size())
    throw std::invalid_argument("assemble_truncated: insufficient chain history");
  const Eigen::Index r = run.xi.size();
  TruncatedOperator op;
  op.blocks = K + 1;
  op.block_dim = static_cast<int>(r);
  op.T = Matrix::Zero((K + 1) * r, (K + 1) * r);
  for (int k = 0; k <= K; ++k) {
    const Matrix& Dk =
        (static_cast<std::size_t>(k) < run.history.size()) ? run.history[static_cast<std::size_t>(k)].D : run.final_D;
    op.T.block(k * r, k * r, r, r) = Dk;
    if (k < K) op.T.block((k + 1) * r, k * r, r, r) = run.history[static_cast<std::size_t>(k)].A;
  }
  op.xi = Vector::Zero((K + 1) * r);
  op.xi.head(r) = run.xi;
  op.norm = operator_norm(op.T);
  return op;
}

Vector resolvent_pair(const TruncatedOperator& op, cplx w, cplx z) {
  const Eigen::Index n = op.T.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Vector y = (op.T.adjoint() - std::conj(z) * id).partialPivLu().solve(op.xi);
  return (op.T - w * id).partialPivLu().solve(y);
}

cplx operator_L(const TruncatedOperator& op, const PointQuad& q) {
  for (cplx p : {q.w, q.z, q.u, q.v}) {
    if (std::abs(p) < 1.5 * op.norm)
      throw std::domain_error("operator_L: argument inside the truncation-bias guard 1.5||T||");
  }
  const Vector rho_wz = resolvent_pair(op, q.w, q.z);
  const Vector rho_uv = resolvent_pair(op, q.u, q.v);
  return rho_uv.dot(rho_wz);
}

cplx neumann_L(const ChainRun& run, const PointQuad& q, int K) {
  if (K < 0 || static_cast<std::size_t>(K) > run.history.size())
    throw std::invalid_argument("neumann_L: insufficient chain history");
  double max_d = 0.0, max_a = 0.0;
  for (const auto& st : run.history) {
    max_d = std::max(max_d, st.norm_D);
    max_a = std::max(max_a, operator_norm(st.A));
  }
  max_d = std::max(max_d, operator_norm(run.final_D));
  const double radius = max_d + max_a;
  for (cplx p : {q.w, q.z, q.u, q.v}) {
    if (std::abs(p) <= radius)
      throw std::domain_error("neumann_L: argument inside the Neumann radius proxy");
  }

  const Eigen::Index r = run.xi.size();
  const Matrix id = Matrix::Identity(r, r);
  const auto D_at = [&](int k) -> const Matrix& {
    return static_cast<std::size_t>(k) < run.history.size() ? run.history[static_cast<std::size_t>(k)].D
                                                            : run.final_D;
  };

  const auto f0 = [&](cplx w, cplx z) {
    const Vector y = (D_at(0).adjoint() - std::conj(z) * id).partialPivLu().solve(run.xi);
    return Vector((D_at(0) - w * id).partialPivLu().solve(y));
  };

  Vector f_wz = f0(q.w, q.z);
  Vector f_uv = f0(q.u, q.v);
  cplx sum = f_uv.dot(f_wz);
  for (int k = 0; k < K; ++k) {
    const Matrix& A = run.history[static_cast<std::size_t>(k)].A;
    const Matrix& Dn = D_at(k + 1);
    f_wz = (Dn - q.w * id).partialPivLu().solve(Vector(A * f_wz));
    f_uv = (Dn - q.u * id).partialPivLu().solve(Vector(A * f_uv));
    sum += f_uv.dot(f_wz);
  }
  return sum;
}

const cplx& PadeNumerator::at(int i, int j, int k, int l) const {
  return data[static_cast<std::size_t>(((i * d + j) * d + k) * d + l)];
}
cplx& PadeNumerator::at(int i, int j, int k, int l) {
  return data[static_cast<std::size_t>(((i * d + j) * d + k) * d + l)];
}

cplx PadeNumerator::eval(const PointQuad& q) const {
  const cplx zb = std::conj(q.z), ub = std::conj(q.u);
  cplx acc = 0.0;
  for (int i = d - 1; i >= 0; --i) {
    cplx aj = 0.0;
    for (int j = d - 1; j >= 0; --j) {
      cplx ak = 0.0;
      for (int k = d - 1; k >= 0; --k) {
        cplx al = 0.0;
        for (int l = d - 1; l >= 0; --l) al = al * q.v + at(i, j, k, l);
        ak = ak * ub + al;
      }
      aj = aj * zb + ak;
    }
    acc = acc * q.w + aj;
  }
  return acc;
}

PadeNumerator pade_numerator(const SeedData& seed, const ChainRun& run) {
  const int d = seed.degree;
  if (static_cast<int>(run.history.size()) < d)
    throw std::invalid_argument("pade_numerator: chain history shorter than deg P");
  const Eigen::Index r = seed.xi.size();

  // Laurent coefficients of g_k(w, z) = c_{k+1}(z)/w^{k+1} + ... + c_d(z)/w^d,
  // each c_l an r-vector-valued polynomial of degree <= d-1 in conj z,
  // stored as an r x d matrix (column = coefficient of conj(z)^j).
  std::vector<std::vector<Matrix>> laurent(static_cast<std::size_t>(d));
  {
    auto& g0 = laurent[0];
    g0.assign(static_cast<std::size_t>(d + 1), Matrix::Zero(r, d));
    Matrix power = Matrix::Identity(r, r);  // D_0^m
    for (int m = 0; m + 1 <= d; ++m) {
      g0[static_cast<std::size_t>(m + 1)] = -power * seed.V;
      power = seed.D0 * power;
    }
  }
  for (int k = 0; k + 1 < d; ++k) {
    const Matrix& A = run.history[static_cast<std::size_t>(k)].A;
    const Matrix& Dn = run.history[static_cast<std::size_t>(k + 1)].D;
    auto& prev = laurent[static_cast<std::size_t>(k)];
    auto& next = laurent[static_cast<std::size_t>(k + 1)];
    next.assign(static_cast<std::size_t>(d + 1), Matrix::Zero(r, d));
    for (int lp = k + 2; lp <= d; ++lp) {
      Matrix acc = Matrix::Zero(r, d);
      Matrix power = Matrix::Identity(r, r);  // D_{k+1}^{lp - l - 1}
      for (int l = lp - 1; l >= k + 1; --l) {
        acc += power * (A * prev[static_cast<std::size_t>(l)]);
        power = Dn * power;
      }
      next[static_cast<std::size_t>(lp)] = -acc;
    }
  }

  PadeNumerator out;
  out.d = d;
  out.data.assign(static_cast<std::size_t>(d) * d * d * d, cplx(0.0));
  const Matrix& qc = seed.Q.coeffs;
  for (int k = 0; k < d; ++k) {
    const auto& g = laurent[static_cast<std::size_t>(k)];
    for (int l = k + 1; l <= d; ++l) {
      for (int m = k + 1; m <= d; ++m) {
        const Matrix G = g[static_cast<std::size_t>(m)].adjoint() * g[static_cast<std::size_t>(l)];
        // G(jp, j): coefficient of conj(z)^j v^jp in <c_l(z), c_m(v)>.
        for (int alpha = l; alpha <= d; ++alpha) {
          for (int beta = m; beta <= d; ++beta) {
            const cplx qab = qc(alpha, beta);
            if (qab == cplx(0.0)) continue;
            for (int j = 0; j < d; ++j)
              for (int jp = 0; jp < d; ++jp)
                out.at(alpha - l, j, beta - m, jp) += qab * G(jp, j);
          }
        }
      }
    }
  }
  return out;
}

GramReport ellipse_negativity_probe(double r, int N, const SamplePlan& plan) {
  // r = 0 is the disk limit T = S - 1, where the Gram is expected PSD.
  if (!(r >= 0.0 && r < 1.0)) throw std::invalid_argument("ellipse_negativity_probe: r in [0,1)");
  if (N < 32) throw std::invalid_argument("ellipse_negativity_probe: N must be >= 32");
  const double bound = 2.5 * (1.0 + r);
  if (plan.r_lo < bound - 1e-12)
    throw std::invalid_argument("ellipse_negativity_probe: plan band inside the spectrum bound");

  Matrix T = Matrix::Zero(N, N);
  for (int j = 0; j < N; ++j) {
    T(j, j) = -(r + 1.0);
    if (j + 1 < N) {
      T(j + 1, j) = 1.0;  // S
      T(j, j + 1) = r;    // r S*
    }
  }
  Vector xi = Vector::Zero(N);
  xi(0) = std::sqrt(1.0 - r * r);
  const double xi_sq = 1.0 - r * r;

  const auto pts = plan_points(plan);
  const int n = plan.n;
  const Matrix id = Matrix::Identity(N, N);
  std::vector<Vector> x(static_cast<std::size_t>(n)), tx(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    x[static_cast<std::size_t>(k)] =
        (T.adjoint() - std::conj(pts[static_cast<std::size_t>(k)]) * id).partialPivLu().solve(xi);
    tx[static_cast<std::size_t>(k)] = T * x[static_cast<std::size_t>(k)];
  }
  Matrix G(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      G(a, b) = tx[static_cast<std::size_t>(b)].dot(tx[static_cast<std::size_t>(a)]) -
                xi_sq * x[static_cast<std::size_t>(b)].dot(x[static_cast<std::size_t>(a)]);

  const EigReport eig = herm_min_eig(G, 1e-10);
  GramReport rep;
  rep.kernel = "ellipse_c";
  rep.n = n;
  rep.seed = plan.seed;
  rep.min_eig = eig.min_eig;
  rep.tolerance = eig.tolerance;
  rep.psd = eig.psd;
  return rep;
}

MergingResidualReport merging_gram_residual(const DiskSpec& d1, const DiskSpec& d2, int N,
                                            std::span<const cplx> points) {
  const double dist_sq = std::norm(d1.center - d2.center);
  if (d1.radius * d1.radius + d2.radius * d2.radius > dist_sq)
    throw std::domain_error("merging_gram_residual: disks fail the two-disk positivity bound");

  const auto ev1 = KernelEvaluator::from_archipelago(make_archipelago({{d1.center, d1.radius}}));
  const auto ev2 = KernelEvaluator::from_archipelago(make_archipelago({{d2.center, d2.radius}}));
  const auto evu = KernelEvaluator::product(ev1, ev2);

  MergingResidualReport rep;
  const auto n_of = [](const KernelEvaluator& ev, cplx w, cplx u) {
    return 1.0 / ev.eval(w, u) - 1.0;
  };
  for (cplx zi : points) {
    for (cplx zj : points) {
      const cplx nu = n_of(evu, zi, zj);
      const cplx n1 = n_of(ev1, zi, zj);
      const cplx n2 = n_of(ev2, zi, zj);
      rep.closed_form_max = std::max(rep.closed_form_max, std::abs(nu - (n1 + n2 + n1 * n2)));
      rep.max_abs_n2 = std::max(rep.max_abs_n2, std::abs(n2));
    }
  }

  // Operator path: eta(z) = (T - z)^{-1} xi per island and for the union.
  const auto model = [&](const KernelEvaluator& ev) {
    const auto outcome = run_chain_for(ev.node_polynomial(), ev.defining_kernel(), N, 1e-10,
                                       4.0 * (ev.bounding_radius() + 1.0));
    if (outcome.seed.status != SeedStatus::Ok || !outcome.run->report.certified)
      throw std::runtime_error("merging_gram_residual: chain did not survive the truncation budget");
    return assemble_truncated(*outcome.run, N - 1);
  };
  const TruncatedOperator t1 = model(ev1), t2 = model(ev2), tu = model(evu);
  for (cplx p : points) {
    const double margin = 1.01 * std::max({t1.norm, t2.norm, tu.norm});
    if (std::abs(p) <= margin)
      throw std::domain_error("merging_gram_residual: point inside the operator norm margin");
  }

  const auto eta = [](const TruncatedOperator& op, cplx z) {
    const Matrix id = Matrix::Identity(op.T.rows(), op.T.cols());
    return Vector((op.T - z * id).partialPivLu().solve(op.xi));
  };
  std::vector<Vector> eu, e1, e2;
  for (cplx p : points) {
    eu.push_back(eta(tu, p));
    e1.push_back(eta(t1, p));
    e2.push_back(eta(t2, p));
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < points.size(); ++j) {
      const cplx gu = eu[j].dot(eu[i]);
      const cplx g1 = e1[j].dot(e1[i]);
      const cplx g2 = e2[j].dot(e2[i]);
      rep.operator_max = std::max(rep.operator_max, std::abs(gu - (g1 + g2 + g1 * g2)));
    }
  }
  return rep;
}

}  // namespace arch
