// Independent reference implementations used to pin expected values.
// Everything here recomputes results from scratch (plain loops, direct
// Eigen solver calls) and must stay decoupled from the library code paths
// it is used to check.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lrscov/rng.hpp"

namespace oracles {

// Bitwise equality (no tolerance); assumes NaN-free inputs.
inline bool bitwise_equal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

// Random dense symmetric matrix with entries in [-1, 1].
inline Eigen::MatrixXd random_symmetric(lrscov::Rng& rng, int p) {
  Eigen::MatrixXd m(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = i; j < p; ++j) {
      const double v = rng.uniform(-1.0, 1.0);
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

// Random positive semidefinite matrix A A' / p.
inline Eigen::MatrixXd random_psd(lrscov::Rng& rng, int p) {
  Eigen::MatrixXd a(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) a(i, j) = rng.gaussian();
  Eigen::MatrixXd m = a * a.transpose() / static_cast<double>(p);
  return 0.5 * (m + m.transpose());
}

// Reference singular value thresholding: direct eigensolve, clamp at zero,
// reconstruct.
inline Eigen::MatrixXd svt(const Eigen::MatrixXd& m, double psi) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  Eigen::VectorXd vals = es.eigenvalues();
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    vals(i) = std::max(vals(i) - psi, 0.0);
  return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().transpose();
}

// Reference off-diagonal soft thresholding.
inline Eigen::MatrixXd soft_offdiag(const Eigen::MatrixXd& m, double rho) {
  Eigen::MatrixXd out = m;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i == j) continue;
      const double x = m(i, j);
      if (x > rho) out(i, j) = x - rho;
      else if (x < -rho) out(i, j) = x + rho;
      else out(i, j) = 0.0;
    }
  }
  return out;
}

// Composite objective 1/2 ||L + S - target||_F^2 + psi ||L||_* + rho ||S||_{1,off}.
// For the PSD iterates produced by singular value thresholding, the nuclear
// norm equals the trace, giving an eigensolver-free evaluation route.
inline double objective(const Eigen::MatrixXd& L, const Eigen::MatrixXd& S,
                        const Eigen::MatrixXd& target, double psi,
                        double rho) {
  double fit = 0.0;
  double l1_off = 0.0;
  for (Eigen::Index i = 0; i < L.rows(); ++i) {
    for (Eigen::Index j = 0; j < L.cols(); ++j) {
      const double d = L(i, j) + S(i, j) - target(i, j);
      fit += d * d;
      if (i != j) l1_off += std::abs(S(i, j));
    }
  }
  return 0.5 * fit + psi * L.trace() + rho * l1_off;
}

// Reference sample covariance with divisor n - 1, accumulated entry by entry.
inline Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& X,
                                         bool center) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(p);
  if (center) {
    for (Eigen::Index i = 0; i < n; ++i) mean += X.row(i).transpose();
    mean /= static_cast<double>(n);
  }
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index a = 0; a < p; ++a) {
      for (Eigen::Index b = 0; b < p; ++b) {
        cov(a, b) += (X(i, a) - mean(a)) * (X(i, b) - mean(b));
      }
    }
  }
  return cov / static_cast<double>(n - 1);
}

// Exhaustive support/sign classification counts over pairs i < j.
struct ClassificationCounts {
  long long numvar = 0, s = 0, nz = 0, tp = 0, tn = 0, fp = 0, fn = 0;
  long long fpos = 0, fneg = 0, truth_pos = 0, truth_neg = 0;
  long long pos_correct = 0, neg_correct = 0;
};

inline int sign3(double x, double tol = 1e-12) {
  if (std::abs(x) < tol) return 0;
  return x > 0.0 ? 1 : -1;
}

inline ClassificationCounts classify(const Eigen::MatrixXd& est,
                                     const Eigen::MatrixXd& truth) {
  ClassificationCounts c;
  const Eigen::Index p = truth.rows();
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      ++c.numvar;
      const int t = sign3(truth(i, j));
      const int e = sign3(est(i, j));
      if (t != 0) ++c.s;
      if (e != 0) ++c.nz;
      if (t > 0) ++c.truth_pos;
      if (t < 0) ++c.truth_neg;
      if (t != 0 && e != 0) ++c.tp;
      if (t == 0 && e == 0) ++c.tn;
      if (t == 0 && e != 0) ++c.fp;
      if (t != 0 && e == 0) ++c.fn;
      if (t > 0 && e != 0 && e != t) ++c.fpos;
      if (t < 0 && e != 0 && e != t) ++c.fneg;
      if (t > 0 && e > 0) ++c.pos_correct;
      if (t < 0 && e < 0) ++c.neg_correct;
    }
  }
  return c;
}

// Smallest eigenvalue by direct solver call.
inline double min_eig(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
             m, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

inline double max_eig(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
             m, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .maxCoeff();
}

}  // namespace oracles
