#pragma once

#include <optional>

#include "lrscov/estimators.hpp"
#include "lrscov/simgen.hpp"
#include "lrscov/types.hpp"

namespace lrscov {

// Loss   = ||S_hat - S*||_F + ||L_hat - L*||_F
// Total  = ||Sigma_hat - Sigma*||_F
// Sample = ||Sigma_hat - Sigma_n||_F
struct FittingLosses {
  double loss = 0.0;
  double loss_L = 0.0;
  double loss_S = 0.0;
  double total_loss = 0.0;
  double sample_total_loss = 0.0;
};

FittingLosses fitting_losses(const Estimate& est, const GroundTruth& gt,
                             const SymmetricMatrix& sigma_n);

// Support and sign classification over off-diagonal pairs i < j
// (numvar = p(p-1)/2, s = true nonzero pairs). Rates conditioned on an empty
// class are reported as absent, not as zero.
struct ClassificationMetrics {
  long long numvar = 0;
  long long s = 0;       // true nonzeros
  long long nz = 0;      // estimated nonzeros
  long long tp = 0;      // estimated nonzero where truth nonzero
  long long tn = 0;      // estimated zero where truth zero
  long long fp = 0;      // estimated nonzero where truth zero
  long long fn = 0;      // estimated zero where truth nonzero
  long long fpos = 0;    // truth positive, estimated nonzero with wrong sign
  long long fneg = 0;    // truth negative, estimated nonzero with wrong sign
  long long truth_pos = 0;
  long long truth_neg = 0;

  double perc_nz = 0.0;             // nz / numvar
  double err = 0.0;                 // (fp + fn) / numvar
  double errtot = 0.0;              // (fpos + fneg + fn) / numvar
  std::optional<double> errplus;    // (fpos + fneg) / s
  std::optional<double> sens;       // tp / s
  std::optional<double> spec;       // tn / (numvar - s)
  std::optional<double> senspos;    // truth>0 estimated positive / truth>0
  std::optional<double> specpos;    // truth<0 estimated negative / truth<0
};

ClassificationMetrics classification_metrics(const SparseComponent& S_hat,
                                             const SparseComponent& S_star);

// Eigen-structure comparison. eig_* are Euclidean distances between sorted
// eigenvalue vectors (shorter spectrum zero-padded); condition numbers are
// lambda_1 / lambda_p (lambda_1 / lambda_r for low rank components).
struct StructureMetrics {
  double theta_hat = 0.0;      // trace(L_hat) / trace(Sigma_hat)
  double rho_corr_hat = 0.0;   // off-diag |S_hat| mass / total |Sigma_hat| mass
  double eig_sigma = 0.0;
  double eig_S = 0.0;
  double eig_L = 0.0;
  double cond_sigma = 0.0;
  double cond_S = 0.0;
  double cond_L = 0.0;
  double spec_sigma = 0.0;
  double spec_S = 0.0;
  double spec_L = 0.0;
};

StructureMetrics structure_metrics(const Estimate& est, const GroundTruth& gt);

// max( ||S_hat - S*||_inf / gamma , ||L_hat - L*||_2 )
double g_gamma_loss(const Estimate& est, const GroundTruth& gt, double gamma);

// Everything the benchmark tables report, in one row.
struct MetricsReport {
  FittingLosses losses;
  ClassificationMetrics classification;
  StructureMetrics structure;
  double g_gamma = 0.0;
};

MetricsReport compute_metrics(const Estimate& est, const GroundTruth& gt,
                              const SymmetricMatrix& sigma_n, double gamma);

// Truth-free summary of an estimate against the sample covariance it was
// fitted to; the field set of the real-data report.
struct EstimateSummary {
  int r_hat = 0;
  long long nz = 0;
  double perc_nz = 0.0;
  double theta_hat = 0.0;
  double rho_corr_hat = 0.0;
  double sample_total_loss = 0.0;
  double cond_sigma = 0.0;
  double cond_S = 0.0;
  double cond_L = 0.0;
  double spec_sigma = 0.0;
  double spec_S = 0.0;
  double spec_L = 0.0;
};

EstimateSummary summarize_estimate(const Estimate& est,
                                   const SymmetricMatrix& sigma_n);

}  // namespace lrscov
