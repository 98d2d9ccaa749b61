#include "lrscov/estimators.hpp"

#include <cmath>
#include <string>

namespace lrscov {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::alce: return "alce";
    case Method::unalce: return "unalce";
    case Method::poet: return "poet";
    case Method::sample: return "sample";
  }
  return "unknown";
}

Method method_from_string(std::string_view name) {
  if (name == "alce") return Method::alce;
  if (name == "unalce") return Method::unalce;
  if (name == "poet") return Method::poet;
  if (name == "sample") return Method::sample;
  throw InputError("unknown method: " + std::string(name));
}

ThresholdKind threshold_kind_from_string(std::string_view name) {
  if (name == "soft") return ThresholdKind::soft;
  if (name == "hard") return ThresholdKind::hard;
  throw InputError("unknown threshold kind: " + std::string(name));
}

void SolverConfig::validate() const {
  if (!(psi > 0.0)) throw InputError("solver psi must be > 0");
  if (!(rho > 0.0)) throw InputError("solver rho must be > 0");
  if (!(epsilon > 0.0)) throw InputError("solver epsilon must be > 0");
  if (max_iter < 1) throw InputError("solver max_iter must be >= 1");
}

SymmetricMatrix LowRankComponent::reconstruct() const {
  if (rank() == 0) return SymmetricMatrix::zero(dim);
  Eigen::MatrixXd rec = basis * eigenvalues.asDiagonal() * basis.transpose();
  return SymmetricMatrix::from_symmetric_unchecked(
      0.5 * (rec + rec.transpose()));
}

LowRankComponent LowRankComponent::zero(Eigen::Index p) {
  LowRankComponent out;
  out.basis = Eigen::MatrixXd::Zero(p, 0);
  out.eigenvalues = Eigen::VectorXd::Zero(0);
  out.dim = p;
  return out;
}

LowRankComponent LowRankComponent::from_eigenpairs(Eigen::MatrixXd basis,
                                                   Eigen::VectorXd eigenvalues,
                                                   Eigen::Index dim) {
  if (basis.rows() != dim || basis.cols() != eigenvalues.size()) {
    throw InputError("low rank component: basis/eigenvalue shape mismatch");
  }
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    if (!(eigenvalues(i) > 0.0)) {
      throw InputError("low rank component eigenvalues must be > 0");
    }
    if (i > 0 && eigenvalues(i) > eigenvalues(i - 1)) {
      throw InputError("low rank component eigenvalues must be descending");
    }
  }
  LowRankComponent out;
  out.basis = std::move(basis);
  out.eigenvalues = std::move(eigenvalues);
  out.dim = dim;
  return out;
}

int SparseComponent::max_degree() const {
  const Eigen::Index p = entries.dim();
  int best = 0;
  for (Eigen::Index i = 0; i < p; ++i) {
    int deg = 0;
    for (Eigen::Index j = 0; j < p; ++j)
      if (!is_zero_entry(entries(i, j))) ++deg;
    best = std::max(best, deg);
  }
  return best;
}

SparseComponent SparseComponent::from_matrix(SymmetricMatrix m) {
  SparseComponent out;
  const Eigen::Index p = m.dim();
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = i + 1; j < p; ++j)
      if (!is_zero_entry(m(i, j)))
        out.support.emplace_back(static_cast<int>(i), static_cast<int>(j));
  out.entries = std::move(m);
  return out;
}

void Estimate::validate(double tol) const {
  const Eigen::MatrixXd rec =
      low_rank.reconstruct().mat() + sparse.entries.mat();
  const double err = (sigma.mat() - rec).norm();
  if (!(err <= tol)) {
    throw NumericalError("estimate inconsistency: ||sigma - (L + S)||_F = " +
                         std::to_string(err));
  }
}

double alce_step(SolverState& state, const SymmetricMatrix& sigma_n,
                 const SolverConfig& cfg) {
  const Eigen::MatrixXd G =
      state.Y.mat() + state.Z.mat() - sigma_n.mat();

  state.Y_pre =
      SymmetricMatrix::from_symmetric_unchecked(state.Y.mat() - 0.5 * G);
  state.Z_pre =
      SymmetricMatrix::from_symmetric_unchecked(state.Z.mat() - 0.5 * G);

  const SvtResult lr = svt(state.Y_pre, cfg.psi);
  SymmetricMatrix L_new = lr.low_rank;
  SymmetricMatrix S_new = soft_threshold_offdiag(state.Z_pre, cfg.rho);

  const double eta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * state.eta * state.eta));
  const double momentum = (state.eta - 1.0) / eta_next;

  state.Y = SymmetricMatrix::from_symmetric_unchecked(
      L_new.mat() + momentum * (L_new.mat() - state.L.mat()));
  state.Z = SymmetricMatrix::from_symmetric_unchecked(
      S_new.mat() + momentum * (S_new.mat() - state.S.mat()));

  const double crit =
      (L_new.mat() - state.L.mat()).norm() / (1.0 + state.L.mat().norm()) +
      (S_new.mat() - state.S.mat()).norm() / (1.0 + state.S.mat().norm());

  state.L = std::move(L_new);
  state.S = std::move(S_new);
  state.eta = eta_next;
  ++state.iter;
  return crit;
}

std::pair<Estimate, SolverState> alce_solve(const SymmetricMatrix& sigma_n,
                                            const SolverConfig& cfg) {
  cfg.validate();
  const Eigen::Index p = sigma_n.dim();

  SolverState state;
  state.L = SymmetricMatrix::diagonal(0.5 * sigma_n.diagonal_vector());
  state.S = state.L;
  state.Y = state.L;
  state.Z = state.S;
  state.eta = 1.0;
  state.iter = 0;

  bool converged = false;
  while (state.iter < cfg.max_iter) {
    const double crit = alce_step(state, sigma_n, cfg);
    if (crit <= cfg.epsilon) {
      converged = true;
      break;
    }
  }

  // The retained eigenpairs of the final iterate come from one more SVT of
  // the same point, which reproduces L bit for bit.
  const SvtResult lr = svt(state.Y_pre, cfg.psi);

  Estimate est;
  est.low_rank = LowRankComponent::from_eigenpairs(lr.vectors, lr.values, p);
  est.sparse = SparseComponent::from_matrix(state.S);
  est.sigma = SymmetricMatrix::from_symmetric_unchecked(state.L.mat() +
                                                        state.S.mat());
  est.method = Method::alce;
  est.solver_iters = state.iter;
  est.converged = converged;
  est.psi = cfg.psi;
  est.rho = cfg.rho;
  return {std::move(est), std::move(state)};
}

Estimate unalce_from_alce(const Estimate& alce, const SolverState& state,
                          std::optional<double> psi_breve) {
  if (alce.method != Method::alce) {
    throw InputError("un-shrinkage expects an ALCE estimate");
  }
  if (state.L.dim() != alce.dim()) {
    throw InputError("solver state dimension does not match the estimate");
  }
  const double shift = psi_breve.value_or(alce.psi);
  if (!(shift > 0.0)) throw InputError("psi_breve must be > 0");

  if (alce.rank() == 0) {
    Estimate out = alce;
    out.unshrink_noop = true;
    return out;
  }

  const Eigen::Index p = alce.dim();
  Estimate out;
  out.low_rank = LowRankComponent::from_eigenpairs(
      alce.low_rank.basis, alce.low_rank.eigenvalues.array() + shift, p);

  const SymmetricMatrix L_new = out.low_rank.reconstruct();
  Eigen::MatrixXd S_new = alce.sparse.entries.mat();
  S_new.diagonal() = alce.sigma.diagonal_vector() - L_new.diagonal_vector();
  out.sparse = SparseComponent::from_matrix(
      SymmetricMatrix::from_symmetric_unchecked(std::move(S_new)));

  // The diagonal of sigma is carried over bitwise; off-diagonals come from
  // the reconstruction.
  Eigen::MatrixXd sigma_new = L_new.mat() + out.sparse.entries.mat();
  sigma_new.diagonal() = alce.sigma.diagonal_vector();
  out.sigma = SymmetricMatrix::from_symmetric_unchecked(std::move(sigma_new));

  out.method = Method::unalce;
  out.solver_iters = alce.solver_iters;
  out.converged = alce.converged;
  out.psi = alce.psi;
  out.rho = alce.rho;
  out.unshrink_psi = shift;
  out.unshrink_nonstandard = shift != alce.psi;
  return out;
}

Estimate poet_estimate(const SymmetricMatrix& sigma_n, int r, double rho,
                       ThresholdKind kind, bool correlation_scale) {
  const Eigen::Index p = sigma_n.dim();
  if (r < 0 || r > p) {
    throw InputError("POET rank must lie in [0, p], got " + std::to_string(r));
  }
  if (rho < 0.0) throw InputError("POET threshold must be >= 0");

  const EigenDecomposition dec = eigendecompose(sigma_n);

  // Retain the top-r strictly positive eigenpairs; zero or negative tail
  // eigenvalues carry no principal-component variance.
  int kept = 0;
  while (kept < r && dec.values(kept) > kZeroTol) ++kept;

  Estimate est;
  est.low_rank = LowRankComponent::from_eigenpairs(
      dec.vectors.leftCols(kept), dec.values.head(kept), p);

  const SymmetricMatrix L = est.low_rank.reconstruct();
  Eigen::MatrixXd resid = sigma_n.mat() - L.mat();

  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < p; ++i) {
      if (i == j) continue;
      const double level =
          correlation_scale
              ? rho * std::sqrt(std::abs(resid(i, i) * resid(j, j)))
              : rho;
      const double x = resid(i, j);
      if (kind == ThresholdKind::soft) {
        const double shrunk = std::abs(x) - level;
        resid(i, j) = shrunk > 0.0 ? (x > 0.0 ? shrunk : -shrunk) : 0.0;
      } else {
        resid(i, j) = std::abs(x) > level ? x : 0.0;
      }
    }
  }

  est.sparse = SparseComponent::from_matrix(
      SymmetricMatrix::from_symmetric_unchecked(std::move(resid)));
  est.sigma = SymmetricMatrix::from_symmetric_unchecked(
      L.mat() + est.sparse.entries.mat());
  est.method = Method::poet;
  est.rho = rho;
  return est;
}

SymmetricMatrix sample_estimate(const Eigen::MatrixXd& X, bool center) {
  const Eigen::Index n = X.rows();
  if (n < 2) {
    throw InputError("sample covariance needs n >= 2 observations, got " +
                     std::to_string(n));
  }
  Eigen::MatrixXd centered = X;
  if (center) centered.rowwise() -= X.colwise().mean();
  Eigen::MatrixXd cov =
      (centered.transpose() * centered) / static_cast<double>(n - 1);
  return SymmetricMatrix::from_symmetric_unchecked(
      0.5 * (cov + cov.transpose()));
}

bool is_positive_definite(const SymmetricMatrix& m, double tol) {
  return min_eigenvalue(m) > tol;
}

}  // namespace lrscov
