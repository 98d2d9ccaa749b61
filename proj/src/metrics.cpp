#include "lrscov/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "lrscov/linalg.hpp"

namespace lrscov {

namespace {

double sign_of(double x) {
  if (is_zero_entry(x)) return 0.0;
  return x > 0.0 ? 1.0 : -1.0;
}

// ||sorted eigenvalues(a) - sorted eigenvalues(b)||_2 with zero padding.
double eig_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::Index len = std::max(a.size(), b.size());
  double sum = 0.0;
  for (Eigen::Index i = 0; i < len; ++i) {
    const double ai = i < a.size() ? a(i) : 0.0;
    const double bi = i < b.size() ? b(i) : 0.0;
    sum += (ai - bi) * (ai - bi);
  }
  return std::sqrt(sum);
}

// Summed entry by entry so exactly-diagonal matrices give an exact zero.
double off_diag_abs_mass(const Eigen::MatrixXd& m) {
  double mass = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j) mass += std::abs(m(i, j));
  return mass;
}

double rho_corr_of(const SymmetricMatrix& S, const SymmetricMatrix& sigma) {
  const double total = sigma.mat().cwiseAbs().sum();
  if (!(total > 0.0)) throw InputError("rho_corr: estimate has zero mass");
  return off_diag_abs_mass(S.mat()) / total;
}

}  // namespace

FittingLosses fitting_losses(const Estimate& est, const GroundTruth& gt,
                             const SymmetricMatrix& sigma_n) {
  if (est.dim() != gt.sigma_star.dim() || est.dim() != sigma_n.dim()) {
    throw InputError("fitting_losses: dimension mismatch");
  }
  FittingLosses out;
  out.loss_L =
      (est.low_rank.reconstruct().mat() - gt.L_star.reconstruct().mat())
          .norm();
  out.loss_S = (est.sparse.entries.mat() - gt.S_star.entries.mat()).norm();
  out.loss = out.loss_L + out.loss_S;
  out.total_loss = (est.sigma.mat() - gt.sigma_star.mat()).norm();
  out.sample_total_loss = (est.sigma.mat() - sigma_n.mat()).norm();
  return out;
}

ClassificationMetrics classification_metrics(const SparseComponent& S_hat,
                                             const SparseComponent& S_star) {
  const Eigen::Index p = S_star.dim();
  if (S_hat.dim() != p) {
    throw InputError("classification_metrics: dimension mismatch");
  }

  ClassificationMetrics m;
  m.numvar = static_cast<long long>(p) * (p - 1) / 2;

  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      const double truth = sign_of(S_star.entries(i, j));
      const double est = sign_of(S_hat.entries(i, j));
      if (truth != 0.0) ++m.s;
      if (est != 0.0) ++m.nz;
      if (truth > 0.0) ++m.truth_pos;
      if (truth < 0.0) ++m.truth_neg;

      if (truth != 0.0 && est != 0.0) {
        ++m.tp;
        if (est != truth) {
          if (truth > 0.0) ++m.fpos;
          else ++m.fneg;
        }
      } else if (truth != 0.0 && est == 0.0) {
        ++m.fn;
      } else if (truth == 0.0 && est != 0.0) {
        ++m.fp;
      } else {
        ++m.tn;
      }
    }
  }

  const auto num = static_cast<double>(m.numvar);
  m.perc_nz = static_cast<double>(m.nz) / num;
  m.err = static_cast<double>(m.fp + m.fn) / num;
  m.errtot = static_cast<double>(m.fpos + m.fneg + m.fn) / num;
  if (m.s > 0) {
    m.errplus = static_cast<double>(m.fpos + m.fneg) / static_cast<double>(m.s);
    m.sens = static_cast<double>(m.tp) / static_cast<double>(m.s);
  }
  if (m.numvar > m.s) {
    m.spec = static_cast<double>(m.tn) / static_cast<double>(m.numvar - m.s);
  }
  if (m.truth_pos > 0) {
    long long correct_pos = 0;
    for (Eigen::Index i = 0; i < p; ++i)
      for (Eigen::Index j = i + 1; j < p; ++j)
        if (sign_of(S_star.entries(i, j)) > 0.0 &&
            sign_of(S_hat.entries(i, j)) > 0.0)
          ++correct_pos;
    m.senspos =
        static_cast<double>(correct_pos) / static_cast<double>(m.truth_pos);
  }
  if (m.truth_neg > 0) {
    long long correct_neg = 0;
    for (Eigen::Index i = 0; i < p; ++i)
      for (Eigen::Index j = i + 1; j < p; ++j)
        if (sign_of(S_star.entries(i, j)) < 0.0 &&
            sign_of(S_hat.entries(i, j)) < 0.0)
          ++correct_neg;
    m.specpos =
        static_cast<double>(correct_neg) / static_cast<double>(m.truth_neg);
  }
  return m;
}

StructureMetrics structure_metrics(const Estimate& est,
                                   const GroundTruth& gt) {
  if (est.dim() != gt.sigma_star.dim()) {
    throw InputError("structure_metrics: dimension mismatch");
  }
  const double trace_sigma = est.sigma.trace();
  if (!(std::abs(trace_sigma) > 0.0)) {
    throw InputError("structure_metrics: estimate has zero trace");
  }

  StructureMetrics out;
  out.theta_hat = est.low_rank.trace() / trace_sigma;
  out.rho_corr_hat = rho_corr_of(est.sparse.entries, est.sigma);

  const Eigen::VectorXd ev_sigma_hat = eigendecompose(est.sigma).values;
  const Eigen::VectorXd ev_sigma_star = eigendecompose(gt.sigma_star).values;
  const Eigen::VectorXd ev_S_hat = eigendecompose(est.sparse.entries).values;
  const Eigen::VectorXd ev_S_star = eigendecompose(gt.S_star.entries).values;

  out.eig_sigma = eig_distance(ev_sigma_hat, ev_sigma_star);
  out.eig_S = eig_distance(ev_S_hat, ev_S_star);
  out.eig_L = eig_distance(est.low_rank.eigenvalues, gt.L_star.eigenvalues);

  const auto cond = [](const Eigen::VectorXd& ev) {
    return ev(ev.size() - 1) != 0.0 ? ev(0) / ev(ev.size() - 1)
                                    : std::numeric_limits<double>::infinity();
  };
  out.cond_sigma = cond(ev_sigma_hat);
  out.cond_S = cond(ev_S_hat);
  out.cond_L = est.rank() > 0 ? cond(est.low_rank.eigenvalues)
                              : std::numeric_limits<double>::quiet_NaN();

  out.spec_sigma = ev_sigma_hat(0);
  out.spec_S = ev_S_hat(0);
  out.spec_L = est.low_rank.spectral_norm();
  return out;
}

double g_gamma_loss(const Estimate& est, const GroundTruth& gt, double gamma) {
  if (!(gamma > 0.0)) throw InputError("g_gamma_loss: gamma must be > 0");
  const double sparse_term =
      (est.sparse.entries.mat() - gt.S_star.entries.mat())
          .cwiseAbs()
          .maxCoeff() /
      gamma;
  const auto low_rank_diff = SymmetricMatrix::from_symmetric_unchecked(
      est.low_rank.reconstruct().mat() - gt.L_star.reconstruct().mat());
  return std::max(sparse_term, operator_norm(low_rank_diff));
}

MetricsReport compute_metrics(const Estimate& est, const GroundTruth& gt,
                              const SymmetricMatrix& sigma_n, double gamma) {
  MetricsReport rep;
  rep.losses = fitting_losses(est, gt, sigma_n);
  rep.classification = classification_metrics(est.sparse, gt.S_star);
  rep.structure = structure_metrics(est, gt);
  rep.g_gamma = g_gamma_loss(est, gt, gamma);
  return rep;
}

EstimateSummary summarize_estimate(const Estimate& est,
                                   const SymmetricMatrix& sigma_n) {
  if (est.dim() != sigma_n.dim()) {
    throw InputError("summarize_estimate: dimension mismatch");
  }
  EstimateSummary out;
  out.r_hat = est.rank();
  out.nz = est.sparse.nonzero_count();
  const auto p = static_cast<double>(est.dim());
  out.perc_nz = static_cast<double>(out.nz) / (p * (p - 1) / 2.0);
  out.theta_hat = est.low_rank.trace() / est.sigma.trace();
  out.rho_corr_hat = rho_corr_of(est.sparse.entries, est.sigma);
  out.sample_total_loss = (est.sigma.mat() - sigma_n.mat()).norm();

  const Eigen::VectorXd ev_sigma = eigendecompose(est.sigma).values;
  const Eigen::VectorXd ev_S = eigendecompose(est.sparse.entries).values;
  out.cond_sigma = ev_sigma(0) / ev_sigma(ev_sigma.size() - 1);
  out.cond_S = ev_S(0) / ev_S(ev_S.size() - 1);
  out.cond_L = est.rank() > 0 ? est.low_rank.eigenvalues(0) /
                                    est.low_rank.eigenvalues(est.rank() - 1)
                              : std::numeric_limits<double>::quiet_NaN();
  out.spec_sigma = ev_sigma(0);
  out.spec_S = ev_S(0);
  out.spec_L = est.low_rank.spectral_norm();
  return out;
}

}  // namespace lrscov
