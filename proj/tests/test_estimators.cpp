#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

#include "lrscov/estimators.hpp"
#include "lrscov/linalg.hpp"
#include "lrscov/rng.hpp"
#include "oracles.hpp"

using namespace lrscov;

namespace {

SymmetricMatrix sym(const Eigen::MatrixXd& m) {
  return SymmetricMatrix::from_dense(m);
}

// A well-conditioned random covariance-like input.
SymmetricMatrix random_cov(Rng& rng, int p) {
  Eigen::MatrixXd m =
      oracles::random_psd(rng, p) + 0.5 * Eigen::MatrixXd::Identity(p, p);
  return sym(m);
}

}  // namespace

TEST_CASE("solver config validation") {
  CHECK_THROWS_AS(alce_solve(SymmetricMatrix::identity(2),
                             SolverConfig{0.0, 0.1, 1e-6, 100}),
                  InputError);
  CHECK_THROWS_AS(alce_solve(SymmetricMatrix::identity(2),
                             SolverConfig{0.1, 0.1, 1e-6, 0}),
                  InputError);
}

TEST_CASE("alce: diagonal input with a dominating nuclear threshold") {
  Eigen::VectorXd d(2);
  d << 2.0, 3.0;
  const SymmetricMatrix sigma_n = SymmetricMatrix::diagonal(d);
  auto [est, state] = alce_solve(sigma_n, SolverConfig{10.0, 0.1, 1e-9, 5000});

  CHECK(est.converged);
  CHECK(est.rank() == 0);
  CHECK(est.low_rank.reconstruct().mat().cwiseAbs().maxCoeff() == 0.0);
  CHECK((est.sparse.entries.mat() - sigma_n.mat()).cwiseAbs().maxCoeff() <
        1e-6);
  CHECK(est.sparse.nonzero_count() == 0);
  est.validate();
}

TEST_CASE("alce: eta momentum sequence") {
  const SymmetricMatrix sigma_n = SymmetricMatrix::identity(3);
  const SolverConfig cfg{0.1, 0.1, 1e-12, 10};

  SolverState state;
  state.L = SymmetricMatrix::diagonal(0.5 * sigma_n.diagonal_vector());
  state.S = state.L;
  state.Y = state.L;
  state.Z = state.S;

  CHECK(state.eta == 1.0);
  alce_step(state, sigma_n, cfg);
  CHECK(state.eta == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0)
                         .epsilon(1e-15));
  const double eta1 = state.eta;
  alce_step(state, sigma_n, cfg);
  CHECK(state.eta ==
        doctest::Approx(0.5 * (1.0 + std::sqrt(1.0 + 4.0 * eta1 * eta1)))
            .epsilon(1e-15));
  CHECK(state.eta > eta1);  // strictly increasing
  CHECK(state.iter == 2);
}

TEST_CASE("alce: objective never increases over the initial point") {
  Rng rng(31);
  for (int rep = 0; rep < 20; ++rep) {
    const int p = 15;
    const SymmetricMatrix sigma_n = random_cov(rng, p);
    const double psi = 0.2 * norm(sigma_n, NormKind::spectral);
    const double rho = 0.1 * norm(sigma_n, NormKind::max);
    const SolverConfig cfg{psi, rho, 1e-6, 3000};

    auto [est, state] = alce_solve(sigma_n, cfg);
    est.validate();

    const Eigen::MatrixXd init =
        Eigen::MatrixXd(0.5 * sigma_n.diagonal_vector().asDiagonal());
    const double obj_init =
        oracles::objective(init, init, sigma_n.mat(), psi, rho);
    const double obj_final = oracles::objective(
        est.low_rank.reconstruct().mat(), est.sparse.entries.mat(),
        sigma_n.mat(), psi, rho);
    CHECK(obj_final <= obj_init + 1e-9);
    CHECK(est.converged);
  }
}

TEST_CASE("alce: returned state is a 2-epsilon fixed point") {
  Rng rng(77);
  const SymmetricMatrix sigma_n = random_cov(rng, 12);
  const double eps = 1e-7;
  const SolverConfig cfg{0.3, 0.02, eps, 5000};
  auto [est, state] = alce_solve(sigma_n, cfg);
  REQUIRE(est.converged);

  SolverState resumed = state;
  const double crit = alce_step(resumed, sigma_n, cfg);
  CHECK(crit < 2.0 * eps);
}

TEST_CASE("alce: non-convergence returns the last iterate flagged") {
  Rng rng(3);
  const SymmetricMatrix sigma_n = random_cov(rng, 10);
  const SolverConfig cfg{0.2, 0.02, 1e-14, 3};
  auto [est, state] = alce_solve(sigma_n, cfg);
  CHECK_FALSE(est.converged);
  CHECK(est.solver_iters == 3);
  est.validate();
}

TEST_CASE("unalce: eigenvalue shift and diagonal preservation") {
  // Pinned example: eigenvalues {2, 1}, shift 0.5 -> {2.5, 1.5}.
  const int p = 3;
  Eigen::MatrixXd basis(p, 2);
  basis << 1, 0, 0, 1, 0, 0;
  Eigen::VectorXd vals(2);
  vals << 2.0, 1.0;

  Estimate alce;
  alce.low_rank = LowRankComponent::from_eigenpairs(basis, vals, p);
  Eigen::MatrixXd s = 0.3 * Eigen::MatrixXd::Identity(p, p);
  s(0, 2) = s(2, 0) = 0.1;
  alce.sparse = SparseComponent::from_matrix(sym(s));
  alce.sigma = SymmetricMatrix::from_symmetric_unchecked(
      alce.low_rank.reconstruct().mat() + s);
  alce.method = Method::alce;
  alce.psi = 0.5;

  SolverState state;
  state.L = SymmetricMatrix::zero(p);

  const Estimate un = unalce_from_alce(alce, state, 0.5);
  CHECK(un.method == Method::unalce);
  CHECK(un.unshrink_psi == 0.5);
  CHECK_FALSE(un.unshrink_nonstandard);  // matches the solve's psi
  CHECK(un.low_rank.eigenvalues(0) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(un.low_rank.eigenvalues(1) == doctest::Approx(1.5).epsilon(1e-15));

  // A different shift is permitted but flagged.
  const Estimate odd = unalce_from_alce(alce, state, 0.25);
  CHECK(odd.unshrink_nonstandard);
  CHECK(odd.low_rank.eigenvalues(0) == doctest::Approx(2.25).epsilon(1e-15));
  // Diagonal of sigma carried over bitwise.
  CHECK(oracles::bitwise_equal(un.sigma.diagonal_vector(),
                               alce.sigma.diagonal_vector()));
  // Off-diagonal sparse entries identical.
  CHECK(un.sparse.entries(0, 2) == alce.sparse.entries(0, 2));
  CHECK(un.sparse.support == alce.sparse.support);
  un.validate();
}

TEST_CASE("unalce on a solved instance: invariants") {
  // Needs a factor-structured input so the nuclear part is nonempty.
  Rng rng(41);
  const int p = 14;
  Eigen::MatrixXd b(p, 2);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < 2; ++j) b(i, j) = rng.gaussian();
  Eigen::MatrixXd m = 3.0 * b * b.transpose() / p +
                      Eigen::MatrixXd::Identity(p, p);
  const SymmetricMatrix sigma_n = sym(0.5 * (m + m.transpose()));
  const SolverConfig cfg{0.4, 0.25, 1e-8, 5000};
  auto [alce, state] = alce_solve(sigma_n, cfg);
  REQUIRE(alce.rank() > 0);

  const Estimate un = unalce_from_alce(alce, state);

  // Rank, support and signs unchanged.
  CHECK(un.rank() == alce.rank());
  REQUIRE(un.sparse.support == alce.sparse.support);
  for (const auto& [i, j] : un.sparse.support) {
    CHECK(un.sparse.entries(i, j) == alce.sparse.entries(i, j));
  }

  // diag(sigma) preserved bitwise.
  CHECK(oracles::bitwise_equal(un.sigma.diagonal_vector(),
                               alce.sigma.diagonal_vector()));

  // Independent eigensolver route: spectra shift by psi.
  const Eigen::VectorXd ev_alce =
      eigendecompose(alce.low_rank.reconstruct()).values;
  const Eigen::VectorXd ev_un =
      eigendecompose(un.low_rank.reconstruct()).values;
  for (int i = 0; i < alce.rank(); ++i) {
    CHECK(ev_un(i) == doctest::Approx(ev_alce(i) + cfg.psi).epsilon(1e-10));
  }

  // Sample total loss gains within the un-shrinkage bounds.
  const double fro_gain = (sigma_n.mat() - alce.sigma.mat()).norm() -
                          (sigma_n.mat() - un.sigma.mat()).norm();
  CHECK(fro_gain >= -1e-8);
  CHECK(fro_gain <= std::sqrt(double(alce.rank())) * cfg.psi + 1e-8);

  const double spec_gain =
      operator_norm(SymmetricMatrix::from_symmetric_unchecked(
          sigma_n.mat() - alce.sigma.mat())) -
      operator_norm(SymmetricMatrix::from_symmetric_unchecked(
          sigma_n.mat() - un.sigma.mat()));
  CHECK(spec_gain >= -1e-8);
  CHECK(spec_gain <= cfg.psi + 1e-8);

  un.validate();
}

TEST_CASE("unalce: empty low rank part is a flagged no-op") {
  Eigen::VectorXd d(2);
  d << 2.0, 3.0;
  auto [est, state] = alce_solve(SymmetricMatrix::diagonal(d),
                                 SolverConfig{10.0, 0.1, 1e-8, 2000});
  REQUIRE(est.rank() == 0);
  const Estimate un = unalce_from_alce(est, state);
  CHECK(un.unshrink_noop);
  CHECK(un.method == Method::alce);
  CHECK(oracles::bitwise_equal(un.sigma.mat(), est.sigma.mat()));
}

TEST_CASE("unalce rejects foreign estimates") {
  const SymmetricMatrix m = SymmetricMatrix::identity(3);
  Estimate poet = poet_estimate(m, 1, 0.0);
  SolverState state;
  state.L = SymmetricMatrix::zero(3);
  CHECK_THROWS_AS(unalce_from_alce(poet, state), InputError);
}

TEST_CASE("poet: limit cases") {
  Rng rng(55);
  const SymmetricMatrix sigma_n = random_cov(rng, 8);

  // r = 0: pure sparsity estimator.
  const Estimate zero_rank = poet_estimate(sigma_n, 0, 0.2);
  CHECK(zero_rank.rank() == 0);
  const Eigen::MatrixXd expected =
      oracles::soft_offdiag(sigma_n.mat(), 0.2);
  CHECK((zero_rank.sparse.entries.mat() - expected).cwiseAbs().maxCoeff() ==
        0.0);

  // r = p, rho = 0: the input is reproduced exactly.
  const Estimate full = poet_estimate(sigma_n, 8, 0.0);
  CHECK((full.sigma.mat() - sigma_n.mat()).cwiseAbs().maxCoeff() < 1e-12);

  // rho = 0 keeps sigma = sigma_n at every rank.
  for (int r = 0; r <= 8; r += 2) {
    const Estimate e = poet_estimate(sigma_n, r, 0.0);
    CHECK((e.sigma.mat() - sigma_n.mat()).norm() < 1e-11);
  }

  CHECK_THROWS_AS(poet_estimate(sigma_n, 9, 0.1), InputError);
  CHECK_THROWS_AS(poet_estimate(sigma_n, -1, 0.1), InputError);
}

TEST_CASE("poet: low rank part equals the truncated eigendecomposition") {
  Rng rng(56);
  const SymmetricMatrix sigma_n = random_cov(rng, 9);
  const int r = 3;
  const Estimate est = poet_estimate(sigma_n, r, 0.1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma_n.mat());
  Eigen::MatrixXd truncated = Eigen::MatrixXd::Zero(9, 9);
  for (int k = 0; k < r; ++k) {
    const Eigen::VectorXd v = es.eigenvectors().col(8 - k);
    truncated += es.eigenvalues()(8 - k) * v * v.transpose();
  }
  CHECK((est.low_rank.reconstruct().mat() - truncated).cwiseAbs().maxCoeff() <
        1e-10);
  est.validate();
}

TEST_CASE("poet: hard thresholding keeps surviving entries unshrunk") {
  Eigen::MatrixXd m(3, 3);
  m << 1.0, 0.4, 0.05, 0.4, 1.0, -0.3, 0.05, -0.3, 1.0;
  const Estimate est = poet_estimate(sym(m), 0, 0.2, ThresholdKind::hard);
  CHECK(est.sparse.entries(0, 1) == 0.4);
  CHECK(est.sparse.entries(1, 2) == -0.3);
  CHECK(est.sparse.entries(0, 2) == 0.0);
}

TEST_CASE("poet: correlation-scale thresholding uses entry-wise levels") {
  // With r = 0 the residual is the input, so the level at (i,j) is
  // rho * sqrt(m_ii m_jj).
  Eigen::MatrixXd m(2, 2);
  m << 4.0, 0.5, 0.5, 9.0;
  const double rho = 0.05;  // level = 0.05 * sqrt(36) = 0.3
  const Estimate soft = poet_estimate(sym(m), 0, rho, ThresholdKind::soft,
                                      /*correlation_scale=*/true);
  CHECK(soft.sparse.entries(0, 1) == doctest::Approx(0.2).epsilon(1e-15));

  const Estimate hard = poet_estimate(sym(m), 0, 0.1, ThresholdKind::hard,
                                      /*correlation_scale=*/true);
  CHECK(hard.sparse.entries(0, 1) == 0.0);  // level 0.6 kills the entry
}

TEST_CASE("sample covariance: pinned and oracle-checked") {
  Eigen::MatrixXd x(2, 2);
  x << 1.0, 0.0, -1.0, 0.0;
  const SymmetricMatrix cov = sample_estimate(x, false);
  CHECK(cov(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(cov(0, 1) == 0.0);
  CHECK(cov(1, 1) == 0.0);

  // Constant column -> zero row and column.
  Eigen::MatrixXd xc(4, 3);
  xc << 1.0, 5.0, 2.0, 2.0, 5.0, 1.0, 3.0, 5.0, -1.0, -2.0, 5.0, 0.5;
  const SymmetricMatrix covc = sample_estimate(xc, true);
  for (int j = 0; j < 3; ++j) {
    CHECK(covc(1, j) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(covc(j, 1) == doctest::Approx(0.0).epsilon(1e-15));
  }

  Rng rng(8);
  Eigen::MatrixXd big(50, 5);
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 5; ++j) big(i, j) = rng.gaussian();
  const SymmetricMatrix lib = sample_estimate(big, true);
  const Eigen::MatrixXd ref = oracles::sample_covariance(big, true);
  CHECK((lib.mat() - ref).cwiseAbs().maxCoeff() < 1e-12);

  Eigen::MatrixXd one_row(1, 3);
  one_row.setZero();
  CHECK_THROWS_AS(sample_estimate(one_row), InputError);
}

TEST_CASE("positive definiteness check") {
  CHECK(is_positive_definite(SymmetricMatrix::identity(3), 0.0));
  Eigen::VectorXd d(2);
  d << 1.0, 0.0;
  CHECK_FALSE(is_positive_definite(SymmetricMatrix::diagonal(d), 0.0));

  Rng rng(12);
  const Eigen::MatrixXd psd = oracles::random_psd(rng, 6);
  const SymmetricMatrix shifted =
      sym(psd + 1e-3 * Eigen::MatrixXd::Identity(6, 6));
  CHECK(is_positive_definite(shifted, 1e-6));
}

TEST_CASE("low rank component validation") {
  Eigen::MatrixXd basis(3, 2);
  basis << 1, 0, 0, 1, 0, 0;
  Eigen::VectorXd bad_order(2);
  bad_order << 1.0, 2.0;
  CHECK_THROWS_AS(LowRankComponent::from_eigenpairs(basis, bad_order, 3),
                  InputError);
  Eigen::VectorXd nonpos(2);
  nonpos << 1.0, 0.0;
  CHECK_THROWS_AS(LowRankComponent::from_eigenpairs(basis, nonpos, 3),
                  InputError);
}

TEST_CASE("sparse component support matches the exact-zero test") {
  Eigen::MatrixXd m(3, 3);
  m << 0.5, 0.0, 1e-13, 0.0, 0.5, -0.2, 1e-13, -0.2, 0.5;
  const SparseComponent s = SparseComponent::from_matrix(sym(m));
  REQUIRE(s.support.size() == 1);
  CHECK(s.support[0] == std::pair<int, int>{1, 2});
  CHECK(s.max_degree() == 2);
  CHECK(s.nonzero_count() == 1);
}
