#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

#include "lrscov/metrics.hpp"
#include "lrscov/rng.hpp"
#include "lrscov/simgen.hpp"
#include "oracles.hpp"

using namespace lrscov;

namespace {

SettingSpec small_spec() {
  SettingSpec s;
  s.p = 10;
  s.n = 200;
  s.r = 2;
  s.theta = 0.6;
  s.c = 2.0;
  s.prop_s = 0.2;
  s.rho_corr = 0.05;
  return s;
}

// The ground truth viewed as an estimate of itself.
Estimate truth_as_estimate(const GroundTruth& gt) {
  Estimate est;
  est.low_rank = gt.L_star;
  est.sparse = gt.S_star;
  est.sigma = gt.sigma_star;
  est.method = Method::alce;
  return est;
}

Estimate sample_as_estimate(const SymmetricMatrix& sigma_n) {
  Estimate est;
  est.low_rank = LowRankComponent::zero(sigma_n.dim());
  est.sparse = SparseComponent::from_matrix(sigma_n);
  est.sigma = sigma_n;
  est.method = Method::sample;
  return est;
}

SparseComponent sparse_from(const Eigen::MatrixXd& m) {
  return SparseComponent::from_matrix(SymmetricMatrix::from_dense(m));
}

}  // namespace

TEST_CASE("fitting losses: exact-recovery and sample-estimate limits") {
  const GroundTruth gt = generate_ground_truth(small_spec(), 42);
  const Eigen::MatrixXd x = sample_data(gt, 200, 7);
  const SymmetricMatrix sigma_n = sample_estimate(x);

  const FittingLosses at_truth =
      fitting_losses(truth_as_estimate(gt), gt, sigma_n);
  CHECK(at_truth.loss == doctest::Approx(0.0));
  CHECK(at_truth.total_loss == doctest::Approx(0.0));
  CHECK(at_truth.sample_total_loss ==
        doctest::Approx((gt.sigma_star.mat() - sigma_n.mat()).norm())
            .epsilon(1e-12));

  const FittingLosses at_sample =
      fitting_losses(sample_as_estimate(sigma_n), gt, sigma_n);
  CHECK(at_sample.sample_total_loss == 0.0);

  // Norm oracle on a generic pair.
  const Estimate est = sample_as_estimate(sigma_n);
  double loss_S = 0.0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      const double d = est.sparse.entries(i, j) - gt.S_star.entries(i, j);
      loss_S += d * d;
    }
  CHECK(at_sample.loss_S == doctest::Approx(std::sqrt(loss_S)).epsilon(1e-12));
  CHECK(at_sample.loss ==
        doctest::Approx(at_sample.loss_L + at_sample.loss_S).epsilon(1e-12));
}

TEST_CASE("classification: exact match and diagonal estimate") {
  const GroundTruth gt = generate_ground_truth(small_spec(), 3);
  const auto s = gt.S_star.nonzero_count();
  REQUIRE(s > 0);

  const ClassificationMetrics perfect =
      classification_metrics(gt.S_star, gt.S_star);
  CHECK(perfect.err == 0.0);
  CHECK(perfect.errtot == 0.0);
  CHECK(*perfect.sens == 1.0);
  CHECK(*perfect.spec == 1.0);
  if (perfect.truth_pos > 0) CHECK(*perfect.senspos == 1.0);
  if (perfect.truth_neg > 0) CHECK(*perfect.specpos == 1.0);

  // Diagonal estimate: everything true is missed.
  const SparseComponent diag = SparseComponent::from_matrix(
      SymmetricMatrix::diagonal(Eigen::VectorXd::Constant(10, 0.4)));
  const ClassificationMetrics missed = classification_metrics(diag, gt.S_star);
  CHECK(missed.fn == s);
  CHECK(missed.err ==
        doctest::Approx(double(s) / double(missed.numvar)).epsilon(1e-15));
  CHECK(*missed.sens == 0.0);
  CHECK(missed.nz == 0);
}

TEST_CASE("classification: empty truth support reports undefined rates") {
  const SparseComponent empty = SparseComponent::from_matrix(
      SymmetricMatrix::diagonal(Eigen::VectorXd::Constant(5, 1.0)));
  Eigen::MatrixXd est = Eigen::MatrixXd::Identity(5, 5);
  est(0, 1) = est(1, 0) = 0.2;
  const ClassificationMetrics m =
      classification_metrics(sparse_from(est), empty);
  CHECK_FALSE(m.errplus.has_value());
  CHECK_FALSE(m.sens.has_value());
  CHECK_FALSE(m.senspos.has_value());
  CHECK_FALSE(m.specpos.has_value());
  CHECK(m.spec.has_value());
  CHECK(m.fp == 1);
}

TEST_CASE("classification: exhaustive oracle on random supports") {
  Rng rng(2718);
  for (int rep = 0; rep < 50; ++rep) {
    const int p = 8;
    Eigen::MatrixXd truth = Eigen::MatrixXd::Zero(p, p);
    Eigen::MatrixXd est = Eigen::MatrixXd::Zero(p, p);
    truth.diagonal().setConstant(1.0);
    est.diagonal().setConstant(1.0);
    for (int i = 0; i < p; ++i) {
      for (int j = i + 1; j < p; ++j) {
        if (rng.uniform() < 0.4) {
          const double v = rng.sign() * rng.uniform(0.1, 1.0);
          truth(i, j) = truth(j, i) = v;
        }
        if (rng.uniform() < 0.4) {
          const double v = rng.sign() * rng.uniform(0.1, 1.0);
          est(i, j) = est(j, i) = v;
        }
      }
    }
    const ClassificationMetrics m =
        classification_metrics(sparse_from(est), sparse_from(truth));
    const oracles::ClassificationCounts c = oracles::classify(est, truth);

    CHECK(m.numvar == c.numvar);
    CHECK(m.s == c.s);
    CHECK(m.nz == c.nz);
    CHECK(m.fp == c.fp);
    CHECK(m.fn == c.fn);
    CHECK(m.tp == c.tp);
    CHECK(m.tn == c.tn);
    CHECK(m.fpos == c.fpos);
    CHECK(m.fneg == c.fneg);

    // Count identities.
    CHECK(m.tp + m.tn + m.fp + m.fn == m.numvar);
    CHECK(m.tp + m.fn == m.s);
    CHECK(m.tn + m.fp == m.numvar - m.s);
    CHECK(m.errtot >= m.err - double(m.fp) / double(m.numvar) - 1e-15);

    CHECK(m.err == double(c.fp + c.fn) / double(c.numvar));
    CHECK(m.errtot == double(c.fpos + c.fneg + c.fn) / double(c.numvar));
    if (c.s > 0) {
      CHECK(*m.errplus == double(c.fpos + c.fneg) / double(c.s));
      CHECK(*m.sens == double(c.tp) / double(c.s));
    }
    if (c.numvar > c.s)
      CHECK(*m.spec == double(c.tn) / double(c.numvar - c.s));
    if (c.truth_pos > 0)
      CHECK(*m.senspos == double(c.pos_correct) / double(c.truth_pos));
    if (c.truth_neg > 0)
      CHECK(*m.specpos == double(c.neg_correct) / double(c.truth_neg));
  }
}

TEST_CASE("structure metrics: self-comparison and diagonal sparse part") {
  const SettingSpec spec = small_spec();
  const GroundTruth gt = generate_ground_truth(spec, 11);
  const StructureMetrics at_truth =
      structure_metrics(truth_as_estimate(gt), gt);

  CHECK(at_truth.eig_sigma == doctest::Approx(0.0));
  CHECK(at_truth.eig_S == doctest::Approx(0.0));
  CHECK(at_truth.eig_L == doctest::Approx(0.0));
  // By generator construction trace(L*) = theta * tau * p, trace(Sigma*) = tau * p.
  CHECK(at_truth.theta_hat == doctest::Approx(spec.theta).epsilon(1e-10));

  // Diagonal sparse part has zero residual covariance proportion.
  Estimate est = truth_as_estimate(gt);
  est.sparse = SparseComponent::from_matrix(SymmetricMatrix::diagonal(
      gt.S_star.entries.diagonal_vector()));
  est.sigma = SymmetricMatrix::from_symmetric_unchecked(
      est.low_rank.reconstruct().mat() + est.sparse.entries.mat());
  CHECK(structure_metrics(est, gt).rho_corr_hat == 0.0);
}

TEST_CASE("structure metrics: formula oracle on a perturbed estimate") {
  const GroundTruth gt = generate_ground_truth(small_spec(), 29);
  const Eigen::MatrixXd x = sample_data(gt, 300, 5);
  const SymmetricMatrix sigma_n = sample_estimate(x);
  const Estimate est = sample_as_estimate(sigma_n);
  const StructureMetrics m = structure_metrics(est, gt);

  // theta_hat: empty L.
  CHECK(m.theta_hat == 0.0);

  // rho_corr_hat recomputed directly.
  double off = 0.0, total = 0.0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      if (i != j) off += std::abs(est.sparse.entries(i, j));
      total += std::abs(est.sigma(i, j));
    }
  CHECK(m.rho_corr_hat == doctest::Approx(off / total).epsilon(1e-12));

  // eig distances against direct solver calls, zero-padded for L.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_hat(est.sigma.mat());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_star(gt.sigma_star.mat());
  double d2 = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double diff = es_hat.eigenvalues()(i) - es_star.eigenvalues()(i);
    d2 += diff * diff;
  }
  CHECK(m.eig_sigma == doctest::Approx(std::sqrt(d2)).epsilon(1e-10));
  CHECK(m.eig_L ==
        doctest::Approx(gt.L_star.eigenvalues.norm()).epsilon(1e-12));
  CHECK(std::isnan(m.cond_L));
  CHECK(m.spec_L == 0.0);
}

TEST_CASE("g_gamma: limits, monotonicity and oracle") {
  const GroundTruth gt = generate_ground_truth(small_spec(), 101);
  CHECK(g_gamma_loss(truth_as_estimate(gt), gt, 0.5) == 0.0);

  const Eigen::MatrixXd x = sample_data(gt, 150, 9);
  const Estimate est = sample_as_estimate(sample_estimate(x));

  // Large gamma leaves only the low rank term.
  const double at_huge = g_gamma_loss(est, gt, 1e12);
  const Eigen::MatrixXd ldiff =
      est.low_rank.reconstruct().mat() - gt.L_star.reconstruct().mat();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ldiff,
                                                    Eigen::EigenvaluesOnly);
  const double expected_l2 = std::max(std::abs(es.eigenvalues().minCoeff()),
                                      std::abs(es.eigenvalues().maxCoeff()));
  CHECK(at_huge == doctest::Approx(expected_l2).epsilon(1e-10));

  // Monotone non-increasing in gamma.
  double prev = g_gamma_loss(est, gt, 0.01);
  for (double gamma : {0.05, 0.1, 0.5, 2.0, 10.0}) {
    const double cur = g_gamma_loss(est, gt, gamma);
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }

  // Full formula oracle.
  const double inf_norm =
      (est.sparse.entries.mat() - gt.S_star.entries.mat())
          .cwiseAbs()
          .maxCoeff();
  CHECK(g_gamma_loss(est, gt, 0.2) ==
        doctest::Approx(std::max(inf_norm / 0.2, expected_l2))
            .epsilon(1e-12));

  CHECK_THROWS_AS(g_gamma_loss(est, gt, 0.0), InputError);
}

TEST_CASE("eig distance is zero iff sorted spectra coincide") {
  const GroundTruth gt = generate_ground_truth(small_spec(), 61);
  const StructureMetrics self = structure_metrics(truth_as_estimate(gt), gt);
  CHECK(self.eig_sigma <= 1e-10);

  Estimate bumped = truth_as_estimate(gt);
  Eigen::VectorXd ev = bumped.low_rank.eigenvalues;
  ev(0) += 0.5;
  bumped.low_rank =
      LowRankComponent::from_eigenpairs(bumped.low_rank.basis, ev, 10);
  bumped.sigma = SymmetricMatrix::from_symmetric_unchecked(
      bumped.low_rank.reconstruct().mat() + bumped.sparse.entries.mat());
  CHECK(structure_metrics(bumped, gt).eig_L > 1e-10);
}

TEST_CASE("estimate summary matches the metric definitions") {
  const GroundTruth gt = generate_ground_truth(small_spec(), 77);
  const Eigen::MatrixXd x = sample_data(gt, 250, 13);
  const SymmetricMatrix sigma_n = sample_estimate(x);

  auto [alce, state] =
      alce_solve(sigma_n, SolverConfig{0.8, 0.05, 1e-7, 4000});
  const Estimate un = unalce_from_alce(alce, state);
  const EstimateSummary s = summarize_estimate(un, sigma_n);

  CHECK(s.r_hat == un.rank());
  CHECK(s.nz == un.sparse.nonzero_count());
  CHECK(s.sample_total_loss ==
        doctest::Approx((un.sigma.mat() - sigma_n.mat()).norm())
            .epsilon(1e-12));
  CHECK(s.theta_hat ==
        doctest::Approx(un.low_rank.trace() / un.sigma.trace())
            .epsilon(1e-12));
  if (s.r_hat > 0) {
    CHECK(s.cond_L == doctest::Approx(un.low_rank.eigenvalues(0) /
                                      un.low_rank.eigenvalues(s.r_hat - 1)));
    CHECK(s.spec_L == un.low_rank.eigenvalues(0));
  }
}
