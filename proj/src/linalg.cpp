#include "lrscov/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace lrscov {

namespace {

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solve_eigen(
    const SymmetricMatrix& m, bool with_vectors) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.compute(m.mat(), with_vectors ? Eigen::ComputeEigenvectors
                                       : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError(
        "symmetric eigendecomposition failed to converge (p = " +
        std::to_string(m.dim()) + ", max |entry| = " +
        std::to_string(m.mat().cwiseAbs().maxCoeff()) + ")");
  }
  return solver;
}

}  // namespace

EigenDecomposition eigendecompose(const SymmetricMatrix& m) {
  const auto solver = solve_eigen(m, true);
  const Eigen::Index p = m.dim();

  // Eigen returns ascending eigenvalues; flip to descending.
  EigenDecomposition dec;
  dec.values = solver.eigenvalues().reverse();
  dec.vectors = solver.eigenvectors().rowwise().reverse();

  // Sign convention: first nonzero coordinate of each eigenvector positive.
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < p; ++i) {
      const double x = dec.vectors(i, j);
      if (x != 0.0) {
        if (x < 0.0) dec.vectors.col(j) = -dec.vectors.col(j);
        break;
      }
    }
  }
  return dec;
}

double max_eigenvalue(const SymmetricMatrix& m) {
  return solve_eigen(m, false).eigenvalues().maxCoeff();
}

double min_eigenvalue(const SymmetricMatrix& m) {
  return solve_eigen(m, false).eigenvalues().minCoeff();
}

double operator_norm(const SymmetricMatrix& m) {
  const auto ev = solve_eigen(m, false).eigenvalues();
  return std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
}

double norm(const SymmetricMatrix& m, NormKind kind) {
  const Eigen::MatrixXd& a = m.mat();
  const Eigen::Index p = m.dim();
  switch (kind) {
    case NormKind::l0: {
      Eigen::Index count = 0;
      for (Eigen::Index j = 0; j < p; ++j)
        for (Eigen::Index i = 0; i < p; ++i)
          if (!is_zero_entry(a(i, j))) ++count;
      return static_cast<double>(count);
    }
    case NormKind::l1:
      return a.cwiseAbs().sum();
    case NormKind::frobenius:
      return a.norm();
    case NormKind::max:
      return a.cwiseAbs().maxCoeff();
    case NormKind::l0_column: {
      Eigen::Index best = 0;
      for (Eigen::Index i = 0; i < p; ++i) {
        Eigen::Index count = 0;
        for (Eigen::Index j = 0; j < p; ++j)
          if (!is_zero_entry(a(i, j))) ++count;
        best = std::max(best, count);
      }
      return static_cast<double>(best);
    }
    case NormKind::l1_column:
      return a.cwiseAbs().rowwise().sum().maxCoeff();
    case NormKind::spectral:
      return max_eigenvalue(m);
    case NormKind::nuclear:
      return solve_eigen(m, false).eigenvalues().sum();
    case NormKind::l1_offdiag: {
      double mass = 0.0;
      for (Eigen::Index j = 0; j < p; ++j)
        for (Eigen::Index i = 0; i < p; ++i)
          if (i != j) mass += std::abs(a(i, j));
      return mass;
    }
    case NormKind::l0_offdiag: {
      Eigen::Index count = 0;
      for (Eigen::Index j = 0; j < p; ++j)
        for (Eigen::Index i = 0; i < p; ++i)
          if (i != j && !is_zero_entry(a(i, j))) ++count;
      return static_cast<double>(count);
    }
  }
  throw InputError("unknown norm kind");
}

NormKind norm_kind_from_string(std::string_view name) {
  if (name == "l0") return NormKind::l0;
  if (name == "l1") return NormKind::l1;
  if (name == "frobenius") return NormKind::frobenius;
  if (name == "max") return NormKind::max;
  if (name == "l0_column") return NormKind::l0_column;
  if (name == "l1_column") return NormKind::l1_column;
  if (name == "spectral") return NormKind::spectral;
  if (name == "nuclear") return NormKind::nuclear;
  if (name == "l1_offdiag") return NormKind::l1_offdiag;
  if (name == "l0_offdiag") return NormKind::l0_offdiag;
  throw InputError("unknown norm kind: " + std::string(name));
}

SvtResult svt(const SymmetricMatrix& m, double psi) {
  if (psi < 0.0) throw InputError("svt threshold must be >= 0");
  const EigenDecomposition dec = eigendecompose(m);
  const Eigen::Index p = m.dim();

  int rank = 0;
  while (rank < p && dec.values(rank) > psi) ++rank;

  SvtResult out;
  out.rank = rank;
  out.vectors = dec.vectors.leftCols(rank);
  out.values = dec.values.head(rank).array() - psi;
  if (rank == 0) {
    out.low_rank = SymmetricMatrix::zero(p);
  } else {
    Eigen::MatrixXd rec =
        out.vectors * out.values.asDiagonal() * out.vectors.transpose();
    out.low_rank =
        SymmetricMatrix::from_symmetric_unchecked(0.5 * (rec + rec.transpose()));
  }
  return out;
}

SymmetricMatrix soft_threshold_offdiag(const SymmetricMatrix& m, double rho) {
  if (rho < 0.0) throw InputError("soft threshold must be >= 0");
  Eigen::MatrixXd out = m.mat();
  const Eigen::Index p = m.dim();
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < p; ++i) {
      if (i == j) continue;
      const double x = out(i, j);
      const double shrunk = std::abs(x) - rho;
      out(i, j) = shrunk > 0.0 ? (x > 0.0 ? shrunk : -shrunk) : 0.0;
    }
  }
  return SymmetricMatrix::from_symmetric_unchecked(std::move(out));
}

}  // namespace lrscov
