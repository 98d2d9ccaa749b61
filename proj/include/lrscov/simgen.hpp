#pragma once

#include <Eigen/Core>

#include <cstdint>

#include "lrscov/estimators.hpp"
#include "lrscov/types.hpp"

namespace lrscov {

// Parameters of a simulated low rank plus sparse ensemble.
struct SettingSpec {
  int p = 0;             // dimension
  int n = 0;             // sample size
  int r = 0;             // latent rank
  double theta = 0.0;    // share of variance carried by the low rank part
  double c = 1.0;        // condition number of L*
  double prop_s = 0.0;   // proportion of nonzero off-diagonal pairs in S*
  double rho_corr = 0.0; // proportion of absolute residual covariance
  double tau = 1.0;      // magnitude: trace(Sigma*) = tau * p
  int replicates = 100;

  void validate() const;

  // The five benchmark settings.
  static SettingSpec preset(int id);

  // Shrinks p and n by the same factor; structure parameters unchanged.
  SettingSpec scaled(double factor) const;
};

struct GroundTruth {
  LowRankComponent L_star;
  SparseComponent S_star;
  SymmetricMatrix sigma_star;  // L* + S*
  std::uint64_t seed = 0;
  // Off-diagonal |S*| mass over total |Sigma*| mass actually reached after
  // the positive-definiteness floor (target: spec.rho_corr within 5%).
  double achieved_rho_corr = 0.0;
};

// Draws a ground truth for the setting, deterministically in the seed:
//  - basis U: orthonormalised p x r standard Gaussian matrix;
//  - eigenvalues of L*: linearly spaced with lambda_1 = c * lambda_r and
//    rescaled so their sum equals tau * theta * p;
//  - S*: round(prop_s p(p-1)/2) uniformly drawn off-diagonal pairs, values
//    with uniform magnitudes and random signs globally scaled so the
//    off-diagonal mass of S* is rho_corr of the total mass of Sigma*;
//    constant diagonal making trace(S*) = (1-theta) tau p; off-diagonals
//    shrunk further only if needed to keep
//    lambda_min(S*) >= 0.01 * min diagonal.
GroundTruth generate_ground_truth(const SettingSpec& spec, std::uint64_t seed);

// n draws of x = B f + e with B = U diag(sqrt(d)), f standard Gaussian and
// e Gaussian with covariance S* (via Cholesky). Rows are observations;
// deterministic in the seed.
Eigen::MatrixXd sample_data(const GroundTruth& gt, int n, std::uint64_t seed);

}  // namespace lrscov
