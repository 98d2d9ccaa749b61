#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <utility>

namespace lrscov {

// Error taxonomy. The CLI maps these onto distinct exit codes:
// InputError -> 2, NumericalError -> 3, NoFeasiblePairError -> 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// Thrown when a threshold search finds no positive-definite candidate.
// Carries the best infeasible pair so callers can report it.
class NoFeasiblePairError : public Error {
 public:
  NoFeasiblePairError(const std::string& msg, double psi, double rho,
                      double criterion)
      : Error(msg), best_psi(psi), best_rho(rho), best_criterion(criterion) {}

  double best_psi;
  double best_rho;
  double best_criterion;
};

// Entries with |x| below this are treated as exact zeros by the l0 norms and
// by support extraction. Soft thresholding produces analytic zeros; the
// tolerance only absorbs accumulation dust from reconstructions.
inline constexpr double kZeroTol = 1e-12;

inline bool is_zero_entry(double x) { return std::abs(x) < kZeroTol; }

// Dense symmetric p x p matrix with entrywise-exact symmetry.
//
// Symmetry is established once at construction (validate + symmetrize) and is
// preserved exactly by entrywise arithmetic on symmetric operands. Routines
// that rebuild a matrix from factors (e.g. U D U') must re-symmetrize before
// wrapping, which from_dense() does.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;

  // Validates squareness and symmetry (max |m - m'| <= asym_tol), then stores
  // the exactly symmetric average (m + m')/2.
  static SymmetricMatrix from_dense(const Eigen::MatrixXd& m,
                                    double asym_tol = 1e-8) {
    if (m.rows() != m.cols()) {
      throw InputError("matrix is not square: " + std::to_string(m.rows()) +
                       "x" + std::to_string(m.cols()));
    }
    if (m.rows() < 1) throw InputError("matrix dimension must be >= 1");
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (!(asym <= asym_tol)) {
      throw InputError("matrix is not symmetric: max |m_ij - m_ji| = " +
                       std::to_string(asym));
    }
    Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    return SymmetricMatrix(std::move(sym));
  }

  // Wraps a matrix already known to be entrywise symmetric (no averaging).
  // Used on fast paths where symmetry is preserved by construction.
  static SymmetricMatrix from_symmetric_unchecked(Eigen::MatrixXd m) {
    eigen_assert(m.rows() == m.cols());
    return SymmetricMatrix(std::move(m));
  }

  static SymmetricMatrix zero(Eigen::Index p) {
    return SymmetricMatrix(Eigen::MatrixXd::Zero(p, p));
  }

  static SymmetricMatrix identity(Eigen::Index p) {
    return SymmetricMatrix(Eigen::MatrixXd::Identity(p, p));
  }

  static SymmetricMatrix diagonal(const Eigen::VectorXd& d) {
    return SymmetricMatrix(Eigen::MatrixXd(d.asDiagonal()));
  }

  Eigen::Index dim() const { return m_.rows(); }
  bool empty() const { return m_.size() == 0; }

  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  const Eigen::MatrixXd& mat() const { return m_; }

  double trace() const { return m_.trace(); }
  Eigen::VectorXd diagonal_vector() const { return m_.diagonal(); }

 private:
  explicit SymmetricMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {}

  Eigen::MatrixXd m_;
};

// Spectral decomposition M = vectors * diag(values) * vectors', eigenvalues
// sorted descending, each eigenvector's first nonzero coordinate positive so
// repeated calls are bitwise identical.
struct EigenDecomposition {
  Eigen::MatrixXd vectors;
  Eigen::VectorXd values;
};

}  // namespace lrscov
