#pragma once

#include <optional>
#include <span>
#include <vector>

#include "arch/kernels.hpp"
#include "arch/sampling.hpp"

namespace arch {

/// Seed of the block-matrix recurrence: coefficient matrix c of
/// conj(P(z)) P(w) (1 - E(w,z)), its factor V (c = V*V, columns v_k),
/// the cyclic vector xi = -v_{d-1} and the matrix solving
/// D0* v_k = v_{k-1} + conj(p_k) xi.
struct SeedData {
  int degree = 0;   // d = deg P
  int dim = 0;      // model dimension r (= d unless the seed is rank-deficient)
  Matrix coeff;     // d x d hermitian
  Matrix V;         // r x d, c = V* V
  Matrix D0;        // r x r (the block itself; its adjoint solves the v_k system)
  Vector xi;        // r
  NodePolynomial P;
  HermitianPolynomialKernel Q;
};

enum class SeedStatus { Ok, NotPsd, DegenerateSeed };

struct SeedResult {
  SeedStatus status = SeedStatus::Ok;
  double offending_eigenvalue = 0.0;  // set when NotPsd
  std::optional<SeedData> seed;
};

/// Expands conj(P(z))P(w) - Q(w,z), checks positivity of the coefficient
/// matrix and builds the model seed by pivoted Cholesky (rank tolerance
/// 1e-10; zero columns dropped). Returns NotPsd with the offending
/// eigenvalue, or DegenerateSeed when the defining system is inconsistent.
SeedResult sos_seed(const NodePolynomial& P, const HermitianPolynomialKernel& Q,
                    double tol = 1e-10);

/// One surviving step of the recurrence
/// A_k^2 = A_{k-1}^2 - [D_k*, D_k],  D_{k+1} = A_k^{-1} D_k A_k.
struct ChainState {
  int step = 0;
  Matrix D, A;
  double norm_D = 0.0;
  double min_eig_A2 = 0.0;
  double trace_A2 = 0.0;
};

enum class ChainFailure { None, ASquaredNotPsd, ASingular, NormBlowup };
const char* chain_failure_name(ChainFailure mode);

struct ChainReport {
  bool certified = false;
  int steps_run = 0;      // completed states in the history
  int failed_at = 0;      // 1-based step index when not certified
  ChainFailure mode = ChainFailure::None;
  Matrix witness;         // matrix reproducing the failure on re-check
};

struct ChainRun {
  ChainReport report;
  std::vector<ChainState> history;  // states k = 0 .. steps_run-1
  Matrix final_D;                   // D_{steps_run}
  Vector xi;
};

/// Runs K steps. Each step requires A_k^2 PSD at the relative tolerance,
/// cond(A_k) <= 1e12 and ||D_{k+1}|| <= norm_cap.
ChainRun chain_run(const SeedData& seed, int K, double tol, double norm_cap);

/// Seed + chain in one call, for decision pipelines.
struct ChainOutcome {
  SeedResult seed;
  std::optional<ChainRun> run;
};
ChainOutcome run_chain_for(const NodePolynomial& P, const HermitianPolynomialKernel& Q,
                           int K, double tol, double norm_cap);

/// Bisection thresholds a*(k) for the symmetric two-disk family D(+-a, 1):
/// smallest a surviving through chain step k (k = 0 is the seed test).
/// Returns k_max entries, k = 0 .. k_max-1; requires k_max >= 3.
std::vector<double> two_disk_threshold_table(int k_max);

/// Lower-bidiagonal block truncation: K+1 diagonal blocks D_0..D_K,
/// subdiagonal blocks A_0..A_{K-1}, xi embedded in the first block.
struct TruncatedOperator {
  int blocks = 0;     // K+1
  int block_dim = 0;  // r
  Matrix T;
  Vector xi;
  double norm = 0.0;

  int dimension() const { return blocks * block_dim; }
};
TruncatedOperator assemble_truncated(const ChainRun& run, int K);

/// rho(w, z) = (T - w)^{-1} (T* - conj z)^{-1} xi.
Vector resolvent_pair(const TruncatedOperator& op, cplx w, cplx z);

/// L through the operator model: <rho(w,z), rho(u,v)>.
/// All four arguments must satisfy |.| >= 1.5 ||T||.
cplx operator_L(const TruncatedOperator& op, const PointQuad& q);

/// Partial sum of the direct-summand series
/// L = sum_k <f_k(w,z), f_k(u,v)>, terms k = 0..K inclusive,
/// f_{k+1} = (D_{k+1} - w)^{-1} A_k f_k. Requires |arguments| above the
/// Neumann radius proxy max_k ||D_k|| + max_k ||A_k||.
cplx neumann_L(const ChainRun& run, const PointQuad& q, int K);

/// Polynomial numerator of the rational kernel P(v)conj(P(z))L = P/Q:
/// coefficients of w^i conj(z)^j conj(u)^k v^l with all degrees <= d-1.
struct PadeNumerator {
  int d = 0;
  std::vector<cplx> data;  // d^4, indexed [i][j][k][l]

  const cplx& at(int i, int j, int k, int l) const;
  cplx& at(int i, int j, int k, int l);
  cplx eval(const PointQuad& q) const;
};
PadeNumerator pade_numerator(const SeedData& seed, const ChainRun& run);

/// Truncated model of the ellipse operator T = rS* + S - r - 1 with
/// xi = sqrt(1-r^2) e_0; assembles the Gram of the coefficient kernel
/// c(v,z) = <T x_z, T x_v> - <x_z, x_v>||xi||^2, x_z = (T* - conj z)^{-1} xi.
/// Expected NOT_PSD for r in (0,1); r = 0 is the PSD disk limit
/// T = S - 1. Requires N >= 32 and the plan band
/// outside the spectrum bound r_lo >= 2.5 (1 + r).
GramReport ellipse_negativity_probe(double r, int N, const SamplePlan& plan);

/// Residuals of the merging identity for the resolvent Gram kernel,
/// N = N1 + N2 + N1*N2, via rational closed forms and via truncated
/// operator models with N blocks. Points must lie outside both disks'
/// model norms. Precondition: the disks pass two-disk closed-form
/// positivity (throws std::domain_error otherwise).
struct MergingResidualReport {
  double closed_form_max = 0.0;
  double operator_max = 0.0;
  double max_abs_n2 = 0.0;  // size of the second island's kernel
};
MergingResidualReport merging_gram_residual(const DiskSpec& d1, const DiskSpec& d2, int N,
                                            std::span<const cplx> points);

}  // namespace arch
