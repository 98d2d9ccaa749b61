#include "lrscov/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "lrscov/parallel.hpp"
#include "lrscov/rng.hpp"

namespace lrscov {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_axis(const std::vector<double>& values, const char* name) {
  if (values.empty()) {
    throw InputError(std::string("threshold grid: ") + name + " axis is empty");
  }
  double prev = 0.0;
  for (double v : values) {
    if (!(v > 0.0)) {
      throw InputError(std::string("threshold grid: ") + name +
                       " values must be > 0");
    }
    if (!(v > prev)) {
      throw InputError(std::string("threshold grid: ") + name +
                       " values must be strictly ascending");
    }
    prev = v;
  }
}

// Selects the feasible minimiser from a psi-major table; ties break on
// smallest psi then smallest rho, which row order already encodes.
SelectionResult pick_selection(std::vector<PairResult> table) {
  const PairResult* best = nullptr;
  const PairResult* best_infeasible = nullptr;
  for (const PairResult& row : table) {
    if (row.pd) {
      if (best == nullptr || row.criterion < best->criterion) best = &row;
    } else if (best_infeasible == nullptr ||
               row.criterion < best_infeasible->criterion) {
      best_infeasible = &row;
    }
  }
  if (best == nullptr) {
    const double psi = best_infeasible ? best_infeasible->psi : 0.0;
    const double rho = best_infeasible ? best_infeasible->rho : 0.0;
    const double crit = best_infeasible ? best_infeasible->criterion : kInf;
    throw NoFeasiblePairError(
        "no threshold pair gives a positive-definite estimate; best "
        "infeasible pair is psi = " +
            std::to_string(psi) + ", rho = " + std::to_string(rho) +
            " (criterion " + std::to_string(crit) + ")",
        psi, rho, crit);
  }
  SelectionResult out;
  out.best_psi = best->psi;
  out.best_rho = best->rho;
  out.criterion_value = best->criterion;
  out.table = std::move(table);
  return out;
}

}  // namespace

void ThresholdGrid::validate() const {
  validate_axis(psi_values, "psi");
  validate_axis(rho_values, "rho");
}

double mc_criterion(const Estimate& est, const SymmetricMatrix& sigma_n,
                    double gamma) {
  if (!(gamma > 0.0)) throw InputError("mc_criterion gamma must be > 0");
  const double trace_sigma = sigma_n.trace();
  if (!(trace_sigma > 0.0)) {
    throw InputError("mc_criterion requires trace(sigma_n) > 0");
  }
  const double theta_hat = est.low_rank.trace() / trace_sigma;
  if (!(theta_hat > 0.0) || !(theta_hat < 1.0)) return kInf;

  const double rank_term =
      est.rank() > 0
          ? static_cast<double>(est.rank()) * est.low_rank.spectral_norm() /
                theta_hat
          : 0.0;
  const double sparse_term =
      norm(est.sparse.entries, NormKind::l1_column) /
      (gamma * (1.0 - theta_hat));
  return std::max(rank_term, sparse_term);
}

SelectionResult select_by_mc(const SymmetricMatrix& sigma_n,
                             const ThresholdGrid& grid,
                             const SolverConfig& cfg_base, int threads) {
  grid.validate();
  const int n_psi = static_cast<int>(grid.psi_values.size());
  const int n_rho = static_cast<int>(grid.rho_values.size());

  std::vector<PairResult> table(static_cast<std::size_t>(n_psi) * n_rho);
  parallel_for(static_cast<int>(table.size()), threads, [&](int idx) {
    const double psi = grid.psi_values[idx / n_rho];
    const double rho = grid.rho_values[idx % n_rho];

    SolverConfig cfg = cfg_base;
    cfg.psi = psi;
    cfg.rho = rho;
    auto [alce, state] = alce_solve(sigma_n, cfg);
    const Estimate est = unalce_from_alce(alce, state);

    PairResult row;
    row.psi = psi;
    row.rho = rho;
    row.criterion = mc_criterion(est, sigma_n, rho / psi);
    row.theta_hat = est.low_rank.trace() / sigma_n.trace();
    row.r_hat = est.rank();
    row.nz = est.sparse.nonzero_count();
    row.pd = is_positive_definite(est.sigma, 0.0);
    table[idx] = row;
  });

  return pick_selection(std::move(table));
}

SelectionResult cross_validate(const Eigen::MatrixXd& X,
                               const ThresholdGrid& grid, int folds,
                               Method method, const SolverConfig& cfg_base,
                               const CvOptions& options) {
  grid.validate();
  const Eigen::Index n = X.rows();
  if (folds < 2) throw InputError("cross-validation needs at least 2 folds");
  if (n < 2 * folds) {
    throw InputError("cross-validation needs n >= 2 H rows, got n = " +
                     std::to_string(n) + " for H = " + std::to_string(folds));
  }
  if (method != Method::alce && method != Method::unalce &&
      method != Method::poet) {
    throw InputError("cross-validation supports alce, unalce or poet");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  if (options.shuffle_seed) {
    Rng rng(*options.shuffle_seed);
    for (Eigen::Index i = n - 1; i > 0; --i) {
      const auto j = static_cast<Eigen::Index>(
          rng.below(static_cast<std::uint64_t>(i) + 1));
      std::swap(order[i], order[j]);
    }
  }

  // Contiguous fold boundaries over the (possibly shuffled) row order.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> fold_bounds;
  for (int f = 0; f < folds; ++f) {
    const Eigen::Index lo = n * f / folds;
    const Eigen::Index hi = n * (f + 1) / folds;
    if (hi - lo < 2) {
      throw InputError("cross-validation fold " + std::to_string(f) +
                       " has fewer than 2 rows");
    }
    fold_bounds.emplace_back(lo, hi);
  }

  struct FoldData {
    Eigen::MatrixXd train;
    SymmetricMatrix validation_cov;
  };
  std::vector<FoldData> fold_data(folds);
  for (int f = 0; f < folds; ++f) {
    const auto [lo, hi] = fold_bounds[f];
    Eigen::MatrixXd train(n - (hi - lo), X.cols());
    Eigen::MatrixXd valid(hi - lo, X.cols());
    Eigen::Index ti = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i >= lo && i < hi) {
        valid.row(i - lo) = X.row(order[i]);
      } else {
        train.row(ti++) = X.row(order[i]);
      }
    }
    fold_data[f].train = std::move(train);
    fold_data[f].validation_cov = sample_estimate(valid);
  }

  const int n_rho = static_cast<int>(grid.rho_values.size());
  std::vector<PairResult> table(grid.size());
  parallel_for(static_cast<int>(table.size()), options.threads, [&](int idx) {
    const double psi = grid.psi_values[idx / n_rho];
    const double rho = grid.rho_values[idx % n_rho];

    double loss_sum = 0.0;
    bool all_pd = true;
    Estimate last;
    for (const FoldData& fold : fold_data) {
      const SymmetricMatrix train_cov = sample_estimate(fold.train);
      Estimate est;
      if (method == Method::poet) {
        est = poet_estimate(train_cov, options.poet_rank, rho,
                            options.poet_threshold,
                            options.poet_correlation_scale);
      } else {
        SolverConfig cfg = cfg_base;
        cfg.psi = psi;
        cfg.rho = rho;
        auto [alce, state] = alce_solve(train_cov, cfg);
        est = method == Method::unalce ? unalce_from_alce(alce, state)
                                       : std::move(alce);
      }
      const double d =
          (est.sigma.mat() - fold.validation_cov.mat()).norm();
      loss_sum += d * d;
      all_pd = all_pd && is_positive_definite(est.sigma, 0.0);
      last = std::move(est);
    }

    PairResult row;
    row.psi = psi;
    row.rho = rho;
    row.criterion = loss_sum / folds;
    row.theta_hat = last.low_rank.trace() / last.sigma.trace();
    row.r_hat = last.rank();
    row.nz = last.sparse.nonzero_count();
    row.pd = all_pd;
    table[idx] = row;
  });

  return pick_selection(std::move(table));
}

DiagnosticsReport incoherence_diagnostics(const LowRankComponent& L,
                                          const SparseComponent& S,
                                          double alpha, int n) {
  if (L.rank() < 1) {
    throw InputError("incoherence diagnostics need a nonempty low rank part");
  }
  if (alpha < 0.0 || alpha > 1.0) {
    throw InputError("spikiness exponent alpha must lie in [0, 1]");
  }
  if (n < 1) throw InputError("sample size must be >= 1");

  const auto p = static_cast<double>(L.dim);
  const auto r = static_cast<double>(L.rank());

  DiagnosticsReport rep;
  rep.alpha = alpha;
  rep.xi_lower = std::sqrt(r / p);

  const double max_row = L.basis.rowwise().squaredNorm().maxCoeff();
  rep.xi_surrogate = std::clamp(2.0 * max_row, rep.xi_lower, 1.0);

  rep.mu_surrogate = static_cast<double>(S.max_degree());

  rep.psi_theoretical =
      (1.0 / rep.xi_surrogate) * std::pow(p, alpha) / std::sqrt(n);

  rep.gamma_lower = 9.0 * rep.xi_surrogate;
  rep.gamma_upper =
      rep.mu_surrogate > 0.0 ? 1.0 / (6.0 * rep.mu_surrogate) : kInf;
  rep.gamma_range_empty =
      gamma_range_is_empty(rep.xi_surrogate, rep.mu_surrogate);
  return rep;
}

bool gamma_range_is_empty(double xi, double mu) {
  if (!(mu > 0.0)) return false;  // upper endpoint is +infinity
  return !(9.0 * xi <= 1.0 / (6.0 * mu));
}

PdConditionsReport pd_conditions(const Estimate& est, double psi_breve) {
  if (est.method != Method::alce && est.method != Method::unalce) {
    throw InputError("pd_conditions expects an ALCE or un-shrunk estimate");
  }
  if (!(psi_breve > 0.0)) throw InputError("psi_breve must be > 0");

  const Eigen::Index p = est.dim();
  const int r = est.rank();

  // Reconstruct the counterpart of the pair by shifting the retained
  // eigenvalues and moving the diagonal difference between S and L.
  const bool have_unalce = est.method == Method::unalce;
  const double shift = have_unalce ? -psi_breve : psi_breve;

  LowRankComponent other_L = est.low_rank;
  other_L.eigenvalues.array() += shift;
  if (r > 0 && !(other_L.eigenvalues(r - 1) > 0.0)) {
    throw InputError(
        "pd_conditions: shifting by psi_breve empties the low rank part");
  }
  const SymmetricMatrix L_est = est.low_rank.reconstruct();
  const SymmetricMatrix L_other = other_L.reconstruct();

  Eigen::MatrixXd S_other = est.sparse.entries.mat();
  S_other.diagonal() += L_est.diagonal_vector() - L_other.diagonal_vector();
  const auto S_other_sym =
      SymmetricMatrix::from_symmetric_unchecked(std::move(S_other));
  const auto sigma_other = SymmetricMatrix::from_symmetric_unchecked(
      L_other.mat() + S_other_sym.mat());

  PdConditionsReport rep;
  rep.psi_breve = psi_breve;
  rep.rank = r;

  const double lr_est = r > 0 ? est.low_rank.eigenvalues(r - 1) : 0.0;
  const double lr_other = r > 0 ? other_L.eigenvalues(r - 1) : 0.0;
  const double lp_S_est = min_eigenvalue(est.sparse.entries);
  const double lp_S_other = min_eigenvalue(S_other_sym);
  const double lp_sigma_est = min_eigenvalue(est.sigma);
  const double lp_sigma_other = min_eigenvalue(sigma_other);

  if (have_unalce) {
    rep.lambda_r_L_unalce = lr_est;
    rep.lambda_r_L_alce = lr_other;
    rep.lambda_p_S_unalce = lp_S_est;
    rep.lambda_p_S_alce = lp_S_other;
    rep.lambda_p_sigma_unalce = lp_sigma_est;
    rep.lambda_p_sigma_alce = lp_sigma_other;
  } else {
    rep.lambda_r_L_alce = lr_est;
    rep.lambda_r_L_unalce = lr_other;
    rep.lambda_p_S_alce = lp_S_est;
    rep.lambda_p_S_unalce = lp_S_other;
    rep.lambda_p_sigma_alce = lp_sigma_est;
    rep.lambda_p_sigma_unalce = lp_sigma_other;
  }

  const double ratio = static_cast<double>(r) / static_cast<double>(p);
  rep.max_basis_row_norm_sq =
      r > 0 ? est.low_rank.basis.rowwise().squaredNorm().maxCoeff() : 0.0;
  rep.eigenvalue_shift_error =
      std::abs(rep.lambda_r_L_unalce - rep.lambda_r_L_alce - psi_breve);
  rep.margin_S =
      rep.lambda_p_S_unalce - (rep.lambda_p_S_alce - ratio * psi_breve);
  rep.margin_sigma = rep.lambda_p_sigma_unalce -
                     (rep.lambda_p_sigma_alce - ratio * psi_breve);
  const double transfer = rep.max_basis_row_norm_sq * psi_breve;
  rep.margin_S_guaranteed =
      rep.lambda_p_S_unalce - (rep.lambda_p_S_alce - transfer);
  rep.margin_sigma_guaranteed =
      rep.lambda_p_sigma_unalce - (rep.lambda_p_sigma_alce - transfer);
  return rep;
}

}  // namespace lrscov
