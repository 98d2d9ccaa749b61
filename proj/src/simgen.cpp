#include "lrscov/simgen.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>
#include <vector>

#include "lrscov/linalg.hpp"
#include "lrscov/rng.hpp"

namespace lrscov {

namespace {

// Distinct sub-streams per generated object.
enum : std::uint64_t {
  kStreamBasis = 1,
  kStreamSupport = 2,
  kStreamValues = 3,
  kStreamData = 4,
};

Eigen::MatrixXd gaussian_matrix(Rng& rng, Eigen::Index rows,
                                Eigen::Index cols) {
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = rng.gaussian();
  return out;
}

// Orthonormal basis of a Gaussian matrix, pinned by making the R diagonal
// of the QR factorisation positive.
Eigen::MatrixXd random_orthonormal(Rng& rng, Eigen::Index p, Eigen::Index r) {
  const Eigen::MatrixXd g = gaussian_matrix(rng, p, r);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(p, r);
  const Eigen::MatrixXd rmat =
      qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < r; ++j)
    if (rmat(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

// Off-diagonal |S| mass divided by total |Sigma| mass at off-diagonal scale
// a, with Sigma = L + S(a).
double rho_corr_at(const Eigen::MatrixXd& L, const Eigen::MatrixXd& S_off,
                   double diag_value, double a) {
  const Eigen::Index p = L.rows();
  double off_mass_S = 0.0;
  double total_mass = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < p; ++i) {
      if (i == j) {
        total_mass += std::abs(L(i, i) + diag_value);
      } else {
        const double s = a * S_off(i, j);
        off_mass_S += std::abs(s);
        total_mass += std::abs(L(i, j) + s);
      }
    }
  }
  return total_mass > 0.0 ? off_mass_S / total_mass : 0.0;
}

}  // namespace

void SettingSpec::validate() const {
  if (p < 2) throw InputError("setting: p must be >= 2");
  if (n < 2) throw InputError("setting: n must be >= 2");
  if (r < 1 || r >= p) throw InputError("setting: need 1 <= r < p");
  if (!(theta > 0.0 && theta < 1.0))
    throw InputError("setting: theta must lie in (0, 1)");
  if (!(c >= 1.0)) throw InputError("setting: condition number c must be >= 1");
  if (!(prop_s > 0.0 && prop_s < 1.0))
    throw InputError("setting: prop_s must lie in (0, 1)");
  if (!(rho_corr > 0.0 && rho_corr < 1.0))
    throw InputError("setting: rho_corr must lie in (0, 1)");
  if (!(tau > 0.0)) throw InputError("setting: tau must be > 0");
  if (replicates < 1) throw InputError("setting: replicates must be >= 1");
}

SettingSpec SettingSpec::preset(int id) {
  SettingSpec s;
  switch (id) {
    case 1:
      s.p = 100; s.n = 1000; s.r = 4; s.theta = 0.7; s.c = 2.0;
      s.prop_s = 0.0238; s.rho_corr = 0.0045;
      break;
    case 2:
      s.p = 100; s.n = 1000; s.r = 4; s.theta = 0.7; s.c = 4.0;
      s.prop_s = 0.0677; s.rho_corr = 0.0048;
      break;
    case 3:
      s.p = 100; s.n = 1000; s.r = 3; s.theta = 0.8; s.c = 4.0;
      s.prop_s = 0.1172; s.rho_corr = 0.0072;
      break;
    case 4:
      s.p = 150; s.n = 150; s.r = 5; s.theta = 0.8; s.c = 2.0;
      s.prop_s = 0.0320; s.rho_corr = 0.0033;
      break;
    case 5:
      s.p = 200; s.n = 100; s.r = 6; s.theta = 0.8; s.c = 2.0;
      s.prop_s = 0.0366; s.rho_corr = 0.0039;
      break;
    default:
      throw InputError("unknown setting id: " + std::to_string(id) +
                       " (expected 1..5)");
  }
  return s;
}

SettingSpec SettingSpec::scaled(double factor) const {
  if (!(factor > 0.0)) throw InputError("scale factor must be > 0");
  SettingSpec out = *this;
  out.p = std::max(r + 1, static_cast<int>(std::lround(p * factor)));
  out.n = std::max(2, static_cast<int>(std::lround(n * factor)));
  return out;
}

GroundTruth generate_ground_truth(const SettingSpec& spec,
                                  std::uint64_t seed) {
  spec.validate();
  const Rng root(seed);
  const Eigen::Index p = spec.p;
  const Eigen::Index r = spec.r;

  // Low rank part: linearly spaced spectrum with condition number c and
  // trace tau * theta * p.
  Eigen::VectorXd multipliers(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    multipliers(i) =
        r > 1 ? 1.0 + (spec.c - 1.0) * static_cast<double>(r - 1 - i) /
                          static_cast<double>(r - 1)
              : 1.0;
  }
  const double lambda_r = spec.tau * spec.theta * p / multipliers.sum();
  const Eigen::VectorXd eigenvalues = multipliers * lambda_r;

  Rng basis_rng = root.spawn(kStreamBasis);
  Eigen::MatrixXd basis = random_orthonormal(basis_rng, p, r);
  LowRankComponent L_star =
      LowRankComponent::from_eigenpairs(std::move(basis), eigenvalues, p);
  const SymmetricMatrix L_mat = L_star.reconstruct();

  // Sparse part: support, raw magnitudes, then the scale that reaches the
  // requested residual covariance proportion.
  const long long pairs_total = static_cast<long long>(p) * (p - 1) / 2;
  const long long support_size = std::llround(spec.prop_s * pairs_total);
  if (support_size < 1) {
    throw InputError("setting: prop_s * p(p-1)/2 rounds to zero pairs");
  }

  Rng support_rng = root.spawn(kStreamSupport);
  std::unordered_set<long long> chosen;
  chosen.reserve(static_cast<std::size_t>(support_size) * 2);
  std::vector<std::pair<int, int>> support;
  support.reserve(static_cast<std::size_t>(support_size));
  while (static_cast<long long>(support.size()) < support_size) {
    const auto flat = static_cast<long long>(
        support_rng.below(static_cast<std::uint64_t>(pairs_total)));
    if (!chosen.insert(flat).second) continue;
    // Row-major enumeration of pairs i < j.
    int i = 0;
    long long remaining = flat;
    while (remaining >= p - 1 - i) {
      remaining -= p - 1 - i;
      ++i;
    }
    const int j = i + 1 + static_cast<int>(remaining);
    support.emplace_back(i, j);
  }
  std::sort(support.begin(), support.end());

  Rng value_rng = root.spawn(kStreamValues);
  Eigen::MatrixXd S_off = Eigen::MatrixXd::Zero(p, p);
  for (const auto& [i, j] : support) {
    const double v = value_rng.sign() * value_rng.uniform(0.5, 1.0);
    S_off(i, j) = v;
    S_off(j, i) = v;
  }

  const double diag_value = (1.0 - spec.theta) * spec.tau;

  // rho_corr_at is increasing in the scale in the regime of interest;
  // bracket then bisect to 0.1% relative accuracy.
  const double target = spec.rho_corr;
  double hi = 1.0;
  double ratio_hi = rho_corr_at(L_mat.mat(), S_off, diag_value, hi);
  int expansions = 0;
  while (ratio_hi < target && expansions < 60) {
    hi *= 2.0;
    ratio_hi = rho_corr_at(L_mat.mat(), S_off, diag_value, hi);
    ++expansions;
  }
  if (ratio_hi < target) {
    throw InputError(
        "setting infeasible: requested rho_corr = " + std::to_string(target) +
        " is unreachable for this support (max " + std::to_string(ratio_hi) +
        ")");
  }
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double ratio = rho_corr_at(L_mat.mat(), S_off, diag_value, mid);
    if (ratio < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (std::abs(ratio - target) <= 1e-3 * target) {
      lo = hi = mid;
      break;
    }
  }
  double scale = 0.5 * (lo + hi);

  auto build_S = [&](double a) {
    Eigen::MatrixXd s = a * S_off;
    s.diagonal().setConstant(diag_value);
    return SymmetricMatrix::from_symmetric_unchecked(std::move(s));
  };

  // Positive-definiteness floor: shrink off-diagonals (trace untouched)
  // until lambda_min(S*) >= 0.01 * diagonal.
  const double floor = 0.01 * diag_value;
  SymmetricMatrix S_mat = build_S(scale);
  if (min_eigenvalue(S_mat) < floor) {
    double good = 0.0;  // lambda_min at 0 is diag_value > floor
    double bad = scale;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (good + bad);
      if (min_eigenvalue(build_S(mid)) >= floor) {
        good = mid;
      } else {
        bad = mid;
      }
    }
    scale = good;
    S_mat = build_S(scale);
    if (min_eigenvalue(S_mat) < floor) {
      throw InputError(
          "setting infeasible: cannot reach lambda_min(S*) >= 0.01 * "
          "diagonal while keeping the requested support");
    }
  }

  GroundTruth gt;
  gt.S_star = SparseComponent::from_matrix(S_mat);
  gt.L_star = std::move(L_star);
  gt.sigma_star = SymmetricMatrix::from_symmetric_unchecked(L_mat.mat() +
                                                            S_mat.mat());
  gt.seed = seed;
  gt.achieved_rho_corr =
      rho_corr_at(L_mat.mat(), S_off, diag_value, scale);
  return gt;
}

Eigen::MatrixXd sample_data(const GroundTruth& gt, int n, std::uint64_t seed) {
  if (n < 2) throw InputError("sample_data needs n >= 2");
  const Eigen::Index p = gt.sigma_star.dim();
  const Eigen::Index r = gt.L_star.rank();

  Eigen::LLT<Eigen::MatrixXd> llt(gt.S_star.entries.mat());
  if (llt.info() != Eigen::Success) {
    throw NumericalError(
        "sample_data: Cholesky factorisation of S* failed (matrix not "
        "positive definite)");
  }
  const Eigen::MatrixXd chol = llt.matrixL();
  const Eigen::MatrixXd B =
      gt.L_star.basis *
      gt.L_star.eigenvalues.cwiseSqrt().asDiagonal();

  Rng rng = Rng(gt.seed).spawn(kStreamData).spawn(seed);
  Eigen::MatrixXd X(n, p);
  Eigen::VectorXd f(r), g(p);
  for (int row = 0; row < n; ++row) {
    for (Eigen::Index k = 0; k < r; ++k) f(k) = rng.gaussian();
    for (Eigen::Index k = 0; k < p; ++k) g(k) = rng.gaussian();
    X.row(row) = (B * f + chol * g).transpose();
  }
  return X;
}

}  // namespace lrscov
