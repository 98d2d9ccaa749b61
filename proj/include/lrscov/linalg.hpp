#pragma once

#include <Eigen/Core>

#include <string_view>

#include "lrscov/types.hpp"

namespace lrscov {

// Matrix norms on symmetric matrices. spectral and nuclear are the
// eigenvalue-based definitions specialised to the positive semidefinite cone:
// spectral = lambda_1(M), nuclear = sum_i lambda_i(M).
enum class NormKind {
  l0,         // number of entries with |m_ij| >= kZeroTol
  l1,         // sum_ij |m_ij|
  frobenius,  // sqrt(sum_ij m_ij^2)
  max,        // max_ij |m_ij|
  l0_column,  // max_i #{j : m_ij != 0}   (maximum degree)
  l1_column,  // max_i sum_j |m_ij|
  spectral,   // lambda_1(M)
  nuclear,    // sum_i lambda_i(M)
  l1_offdiag, // sum_{i != j} |m_ij|
  l0_offdiag, // #{(i,j), i != j : m_ij != 0}
};

double norm(const SymmetricMatrix& m, NormKind kind);

NormKind norm_kind_from_string(std::string_view name);

// Full spectral decomposition with descending eigenvalues and a fixed
// eigenvector sign convention (first nonzero coordinate positive).
// Deterministic: identical inputs give bitwise-identical output.
EigenDecomposition eigendecompose(const SymmetricMatrix& m);

// Largest / smallest eigenvalue without forming eigenvectors.
double max_eigenvalue(const SymmetricMatrix& m);
double min_eigenvalue(const SymmetricMatrix& m);

// Operator 2-norm max_i |lambda_i|; used for spectral distances between
// estimates, where the difference need not be definite.
double operator_norm(const SymmetricMatrix& m);

// Result of singular value thresholding at level psi: the proximal map of
// psi * nuclear norm over symmetric matrices, restricted to the PSD cone.
struct SvtResult {
  SymmetricMatrix low_rank;   // U_r diag(d_r) U_r'
  int rank = 0;               // #{i : lambda_i > psi}
  Eigen::MatrixXd vectors;    // p x rank retained eigenvectors
  Eigen::VectorXd values;     // thresholded eigenvalues lambda_i - psi, descending
};

// Eigendecompose m, shrink eigenvalues by psi and clamp at zero, reconstruct.
SvtResult svt(const SymmetricMatrix& m, double psi);

// Entrywise soft thresholding of the off-diagonal entries at level rho;
// the diagonal is preserved untouched.
SymmetricMatrix soft_threshold_offdiag(const SymmetricMatrix& m, double rho);

}  // namespace lrscov
