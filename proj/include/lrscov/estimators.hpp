#pragma once

#include <Eigen/Core>

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "lrscov/linalg.hpp"
#include "lrscov/types.hpp"

namespace lrscov {

enum class Method { alce, unalce, poet, sample };

std::string_view method_name(Method m);
Method method_from_string(std::string_view name);

// Thresholds and stopping rule of the composite proximal solver.
struct SolverConfig {
  double psi = 0.0;      // nuclear-norm threshold
  double rho = 0.0;      // off-diagonal l1 threshold
  double epsilon = 1e-6; // relative-change convergence precision
  int max_iter = 5000;

  void validate() const;
};

// Rank-r eigenpair representation L = basis * diag(eigenvalues) * basis'.
struct LowRankComponent {
  Eigen::MatrixXd basis;       // p x r, orthonormal columns
  Eigen::VectorXd eigenvalues; // length r, strictly positive, descending
  Eigen::Index dim = 0;

  Eigen::Index rank() const { return eigenvalues.size(); }
  double trace() const { return eigenvalues.sum(); }
  // lambda_1 of the component; 0 for an empty component.
  double spectral_norm() const {
    return rank() > 0 ? eigenvalues(0) : 0.0;
  }
  SymmetricMatrix reconstruct() const;

  static LowRankComponent zero(Eigen::Index p);
  static LowRankComponent from_eigenpairs(Eigen::MatrixXd basis,
                                          Eigen::VectorXd eigenvalues,
                                          Eigen::Index dim);
};

// Dense-storage sparse component with its explicit off-diagonal support.
struct SparseComponent {
  SymmetricMatrix entries;
  std::vector<std::pair<int, int>> support;  // pairs i < j with s_ij != 0

  Eigen::Index dim() const { return entries.dim(); }
  long long nonzero_count() const {
    return static_cast<long long>(support.size());
  }
  // Maximum number of nonzeros in any row, diagonal included.
  int max_degree() const;

  static SparseComponent from_matrix(SymmetricMatrix m);
};

// A low rank plus sparse covariance estimate sigma = L + S.
struct Estimate {
  LowRankComponent low_rank;
  SparseComponent sparse;
  SymmetricMatrix sigma;
  Method method = Method::sample;
  int solver_iters = 0;
  bool converged = true;
  double psi = 0.0;  // thresholds used to produce the estimate (0 if n/a)
  double rho = 0.0;
  // Set when un-shrinkage was requested but the low rank part was empty.
  bool unshrink_noop = false;
  // Eigenvalue shift applied by the un-shrinkage (0 for other methods);
  // flagged when it differs from the psi of the originating solve.
  double unshrink_psi = 0.0;
  bool unshrink_nonstandard = false;

  Eigen::Index dim() const { return sigma.dim(); }
  int rank() const { return static_cast<int>(low_rank.rank()); }

  // max Frobenius discrepancy ||sigma - (L + S)|| tolerated by the invariant.
  void validate(double tol = 1e-10) const;
};

// Solver iterates. Y/Z are the momentum points, Y_pre/Z_pre the gradient-step
// points fed to the proximal operators at the last executed iteration.
struct SolverState {
  SymmetricMatrix L, S, Y, Z;
  double eta = 1.0;
  int iter = 0;
  SymmetricMatrix Y_pre, Z_pre;
};

// Minimises 1/2 ||(L+S) - Sigma_n||_F^2 + psi ||L||_* + rho ||S||_{1,off}
// over PSD L and symmetric S by alternating singular value thresholding and
// off-diagonal soft thresholding with Nesterov acceleration:
//
//   G    = Y + Z - Sigma_n                       (shared gradient)
//   L_t  = SVT_psi(Y - G/2)
//   S_t  = SoftThreshold_rho(Z - G/2)            (diagonal preserved)
//   eta' = (1 + sqrt(1 + 4 eta^2)) / 2
//   (Y,Z) = (L_t,S_t) + (eta-1)/eta' * ((L_t,S_t) - (L_{t-1},S_{t-1}))
//
// started from L_0 = S_0 = diag(Sigma_n)/2, and stopped when
//   ||L_t - L_{t-1}||_F/(1+||L_{t-1}||_F)
//     + ||S_t - S_{t-1}||_F/(1+||S_{t-1}||_F) <= epsilon
// or at max_iter (the last iterate is returned with converged = false).
std::pair<Estimate, SolverState> alce_solve(const SymmetricMatrix& sigma_n,
                                            const SolverConfig& cfg);

// Advances the iteration once; returns the convergence-criterion value of the
// step. alce_solve is a loop over this.
double alce_step(SolverState& state, const SymmetricMatrix& sigma_n,
                 const SolverConfig& cfg);

// Eigenvalue un-shrinkage re-optimisation of an ALCE estimate:
//   L_new = U (D + psi_breve I_r) U'
//   S_new off-diagonal = S_alce off-diagonal
//   diag(S_new) = diag(sigma_alce) - diag(L_new)
// so diag(sigma_new) = diag(sigma_alce) exactly and support, signs and rank
// are unchanged. psi_breve defaults to the psi of the originating solve;
// passing a different value is allowed but unusual.
// With an empty low rank part there is nothing to un-shrink: the ALCE
// estimate is returned unchanged with unshrink_noop set.
Estimate unalce_from_alce(const Estimate& alce, const SolverState& state,
                          std::optional<double> psi_breve = std::nullopt);

enum class ThresholdKind { soft, hard };

ThresholdKind threshold_kind_from_string(std::string_view name);

// Principal components baseline: L = sum of the top-r positive eigenpairs of
// sigma_n, S = thresholded off-diagonals of the residual sigma_n - L with the
// diagonal preserved. When correlation_scale is set the residual entry (i,j)
// is thresholded at rho * sqrt(r_ii r_jj) instead of the constant rho.
Estimate poet_estimate(const SymmetricMatrix& sigma_n, int r, double rho,
                       ThresholdKind kind = ThresholdKind::soft,
                       bool correlation_scale = false);

// Unbiased sample covariance (divisor n-1) of the n x p data matrix X whose
// rows are observations. Columns are centered first unless center == false.
SymmetricMatrix sample_estimate(const Eigen::MatrixXd& X, bool center = true);

// True iff lambda_min(m) > tol.
bool is_positive_definite(const SymmetricMatrix& m, double tol);

}  // namespace lrscov
