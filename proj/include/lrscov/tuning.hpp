#pragma once

#include <Eigen/Core>

#include <optional>
#include <vector>

#include "lrscov/estimators.hpp"
#include "lrscov/types.hpp"

namespace lrscov {

// Cartesian (psi, rho) search space; both axes strictly ascending, positive.
struct ThresholdGrid {
  std::vector<double> psi_values;
  std::vector<double> rho_values;

  void validate() const;
  std::size_t size() const { return psi_values.size() * rho_values.size(); }
};

struct PairResult {
  double psi = 0.0;
  double rho = 0.0;
  double criterion = 0.0;
  double theta_hat = 0.0;
  int r_hat = 0;
  long long nz = 0;
  bool pd = false;
};

struct SelectionResult {
  double best_psi = 0.0;
  double best_rho = 0.0;
  double criterion_value = 0.0;
  std::vector<PairResult> table;  // psi-major, rho-minor order
};

// Maximum criterion for a low rank plus sparse estimate:
//   MC = max( r_hat ||L||_2 / theta_hat , ||S||_{1,v} / (gamma (1 - theta_hat)) )
// with theta_hat = trace(L) / trace(sigma_n) and gamma = rho / psi supplied by
// the caller. theta_hat outside (0,1) disqualifies the pair (+infinity);
// an empty low rank part contributes 0 to the first term.
double mc_criterion(const Estimate& est, const SymmetricMatrix& sigma_n,
                    double gamma);

// Solves ALCE + un-shrinkage at every grid pair, scores the un-shrunk
// estimate with MC at gamma = rho/psi, and returns the positive-definite
// minimiser. Ties break on smallest psi, then smallest rho. Throws
// NoFeasiblePairError (carrying the best infeasible pair) when no pair gives
// a positive-definite estimate. Results are independent of evaluation order.
SelectionResult select_by_mc(const SymmetricMatrix& sigma_n,
                             const ThresholdGrid& grid,
                             const SolverConfig& cfg_base, int threads = 0);

struct CvOptions {
  int poet_rank = 0;  // rank used when method == poet
  ThresholdKind poet_threshold = ThresholdKind::soft;
  bool poet_correlation_scale = false;
  // When set, rows are shuffled with this seed before the contiguous split.
  std::optional<std::uint64_t> shuffle_seed;
  int threads = 0;
};

// H-fold cross-validation on the rows of X: folds are contiguous blocks
// (optionally after a seeded shuffle); the score of a pair is the average
// over folds of ||Sigma_hat(train) - Sigma_n(validation)||_F^2. Returns the
// positive-definite minimiser with the same tie-break as select_by_mc.
SelectionResult cross_validate(const Eigen::MatrixXd& X,
                               const ThresholdGrid& grid, int folds,
                               Method method, const SolverConfig& cfg_base,
                               const CvOptions& options = {});

// Incoherence diagnostics and the theory-driven threshold:
//   xi_lower      = sqrt(r/p)
//   xi_surrogate  = clamp(2 max_i ||row_i(U)||^2, xi_lower, 1)
//   mu_surrogate  = maximum degree of S (diagonal counted)
//   psi_theoretical = (1/xi_surrogate) p^alpha / sqrt(n)
//   gamma_range   = [9 xi_surrogate, 1/(6 mu_surrogate)], empty when
//                   lower > upper (equivalently xi * mu > 1/54).
struct DiagnosticsReport {
  double xi_lower = 0.0;
  double xi_surrogate = 0.0;
  double mu_surrogate = 0.0;
  double psi_theoretical = 0.0;
  double alpha = 0.0;
  double gamma_lower = 0.0;
  double gamma_upper = 0.0;
  bool gamma_range_empty = true;
};

DiagnosticsReport incoherence_diagnostics(const LowRankComponent& L,
                                          const SparseComponent& S,
                                          double alpha, int n);

// The gamma interval [9 xi, 1/(6 mu)] is empty iff xi * mu > 1/54.
bool gamma_range_is_empty(double xi, double mu);

// Positive-definiteness margins of an (ALCE, un-shrunk) estimate pair. The
// counterpart estimate is reconstructed from the eigenvalue shift psi_breve:
// un-shrinking adds psi_breve to every retained eigenvalue of L and moves the
// matching diagonal mass from S, so
//   lambda_r(L_un)  =  lambda_r(L_alce) + psi_breve
// and the diagonal transfer perturbs the small eigenvalues of S and Sigma.
// Two margin conventions are reported for each:
//   margin_*            against (r/p) psi_breve, the average diagonal
//                       transfer (can go negative: the transfer at one
//                       coordinate is psi_breve ||row_i(U)||^2, whose max
//                       exceeds the r/p average);
//   margin_*_guaranteed against psi_breve max_i ||row_i(U)||^2, which
//                       eigenvalue perturbation bounds make nonnegative.
struct PdConditionsReport {
  double psi_breve = 0.0;
  int rank = 0;
  double max_basis_row_norm_sq = 0.0;  // max_i ||row_i(U)||^2, in [r/p, 1]
  double lambda_r_L_alce = 0.0;
  double lambda_r_L_unalce = 0.0;
  double lambda_p_S_alce = 0.0;
  double lambda_p_S_unalce = 0.0;
  double lambda_p_sigma_alce = 0.0;
  double lambda_p_sigma_unalce = 0.0;
  double eigenvalue_shift_error = 0.0;  // |lambda_r(L_un) - lambda_r(L_alce) - psi_breve|
  double margin_S = 0.0;      // lambda_p(S_un) - (lambda_p(S_alce) - (r/p) psi_breve)
  double margin_sigma = 0.0;  // lambda_p(Sigma_un) - (lambda_p(Sigma_alce) - (r/p) psi_breve)
  double margin_S_guaranteed = 0.0;
  double margin_sigma_guaranteed = 0.0;
};

PdConditionsReport pd_conditions(const Estimate& est, double psi_breve);

}  // namespace lrscov
