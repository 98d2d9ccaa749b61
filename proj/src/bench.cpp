#include "lrscov/bench.hpp"

#include <array>
#include <cmath>
#include <utility>

#include "lrscov/parallel.hpp"
#include "lrscov/rng.hpp"

namespace lrscov {

namespace {

struct ReplicateJob {
  GroundTruth truth;
  Eigen::MatrixXd data;
  SymmetricMatrix sigma_n;
};

// Per-replicate threshold choice for the solver-based methods.
struct ChosenThresholds {
  double psi = 0.0;
  double rho = 0.0;
};

ChosenThresholds choose_thresholds(const TuningInput& tuning,
                                   const SymmetricMatrix& sigma_n,
                                   const SolverConfig& base) {
  if (const auto* fixed = std::get_if<FixedThresholds>(&tuning)) {
    return {fixed->psi, fixed->rho};
  }
  const auto& search = std::get<McGridSearch>(tuning);
  const SelectionResult sel = select_by_mc(sigma_n, search.grid, base, 1);
  return {sel.best_psi, sel.best_rho};
}

double choose_poet_rho(const TuningInput& tuning, const ReplicateOptions& opt,
                       const ReplicateJob& job, int rank) {
  if (opt.poet_rho) return *opt.poet_rho;

  ThresholdGrid rho_grid;
  rho_grid.psi_values = {1.0};  // unused by POET
  if (opt.poet_cv_grid) {
    rho_grid.rho_values = opt.poet_cv_grid->rho_values;
  } else if (const auto* fixed = std::get_if<FixedThresholds>(&tuning)) {
    return fixed->rho;
  } else {
    rho_grid.rho_values = std::get<McGridSearch>(tuning).grid.rho_values;
  }

  CvOptions cv;
  cv.poet_rank = rank;
  cv.threads = 1;
  try {
    return cross_validate(job.data, rho_grid, opt.cv_folds, Method::poet,
                          opt.base, cv)
        .best_rho;
  } catch (const NoFeasiblePairError& e) {
    // No PD pair: fall back to the loss minimiser regardless of definiteness.
    return e.best_rho;
  }
}

}  // namespace

std::vector<std::string> metric_column_names() {
  return {"loss",       "loss_L",     "loss_S",   "total_loss",
          "sample_tl",  "theta_hat",  "rho_corr_hat", "perc_nz",
          "err",        "errplus",    "errtot",   "sens",
          "spec",       "senspos",    "specpos",  "eig_sigma",
          "eig_S",      "eig_L",      "cond_sigma", "cond_S",
          "cond_L",     "spec_sigma", "spec_S",   "spec_L",
          "g_gamma"};
}

std::vector<std::optional<double>> metric_column_values(
    const MetricsReport& m) {
  const auto opt_or = [](const std::optional<double>& v) { return v; };
  return {m.losses.loss,
          m.losses.loss_L,
          m.losses.loss_S,
          m.losses.total_loss,
          m.losses.sample_total_loss,
          m.structure.theta_hat,
          m.structure.rho_corr_hat,
          m.classification.perc_nz,
          m.classification.err,
          opt_or(m.classification.errplus),
          m.classification.errtot,
          opt_or(m.classification.sens),
          opt_or(m.classification.spec),
          opt_or(m.classification.senspos),
          opt_or(m.classification.specpos),
          m.structure.eig_sigma,
          m.structure.eig_S,
          m.structure.eig_L,
          m.structure.cond_sigma,
          m.structure.cond_S,
          std::isnan(m.structure.cond_L)
              ? std::optional<double>{}
              : std::optional<double>{m.structure.cond_L},
          m.structure.spec_sigma,
          m.structure.spec_S,
          m.structure.spec_L,
          m.g_gamma};
}

std::map<std::string, std::map<std::string, AggregateCell>>
ReplicateTable::aggregates() const {
  const std::vector<std::string> names = metric_column_names();
  // method -> metric -> (sum, sumsq, count)
  std::map<std::string, std::map<std::string, std::array<double, 3>>> acc;
  for (const ReplicateRow& row : rows) {
    if (!row.ok) continue;
    auto& m = acc[std::string(method_name(row.method))];
    const auto values = metric_column_values(row.metrics);
    for (std::size_t k = 0; k < names.size(); ++k) {
      if (!values[k]) continue;
      auto& cell = m[names[k]];
      cell[0] += *values[k];
      cell[1] += *values[k] * *values[k];
      cell[2] += 1.0;
    }
  }

  std::map<std::string, std::map<std::string, AggregateCell>> out;
  for (const auto& [method, metrics] : acc) {
    for (const auto& [name, cell] : metrics) {
      AggregateCell agg;
      agg.count = static_cast<int>(cell[2]);
      agg.mean = cell[0] / cell[2];
      const double var =
          agg.count > 1
              ? std::max(0.0, (cell[1] - cell[0] * cell[0] / cell[2]) /
                                  (cell[2] - 1.0))
              : 0.0;
      agg.stddev = std::sqrt(var);
      out[method][name] = agg;
    }
  }
  return out;
}

ReplicateTable run_replicates(const SettingSpec& spec,
                              const std::vector<Method>& methods,
                              const TuningInput& tuning,
                              std::uint64_t base_seed,
                              const ReplicateOptions& options) {
  spec.validate();
  if (methods.empty()) throw InputError("run_replicates: no methods given");
  // psi/rho of the base config are placeholders; only the stopping rule is
  // meaningful here.
  if (!(options.base.epsilon > 0.0) || options.base.max_iter < 1) {
    throw InputError("run_replicates: invalid solver stopping rule");
  }

  const int n_rep = spec.replicates;
  const int n_methods = static_cast<int>(methods.size());
  const int poet_rank = options.poet_rank >= 0 ? options.poet_rank : spec.r;

  ReplicateTable table;
  table.rows.resize(static_cast<std::size_t>(n_rep) * n_methods);

  // Shared-truth mode draws one truth up front; fresh mode keys each truth
  // by (base_seed, replicate).
  std::optional<GroundTruth> shared_truth;
  if (!options.fresh_truth_per_replicate) {
    shared_truth = generate_ground_truth(spec, mix_seed(base_seed));
  }

  parallel_for(n_rep, options.threads, [&](int rep) {
    ReplicateJob job;
    const std::uint64_t truth_seed =
        options.fresh_truth_per_replicate
            ? mix_seed(base_seed ^ mix_seed(static_cast<std::uint64_t>(rep)))
            : shared_truth->seed;
    try {
      job.truth = options.fresh_truth_per_replicate
                      ? generate_ground_truth(spec, truth_seed)
                      : *shared_truth;
      job.data = sample_data(job.truth, spec.n,
                             mix_seed(static_cast<std::uint64_t>(rep) + 1));
      job.sigma_n = sample_estimate(job.data);
    } catch (const Error& e) {
      for (int k = 0; k < n_methods; ++k) {
        ReplicateRow& row = table.rows[static_cast<std::size_t>(rep) * n_methods + k];
        row.replicate = rep;
        row.method = methods[k];
        row.truth_seed = truth_seed;
        row.ok = false;
        row.error = e.what();
      }
      return;
    }

    // Solver-based estimates are shared between alce and unalce rows.
    std::optional<ChosenThresholds> chosen;
    std::optional<std::pair<Estimate, SolverState>> alce_result;

    for (int k = 0; k < n_methods; ++k) {
      ReplicateRow& row = table.rows[static_cast<std::size_t>(rep) * n_methods + k];
      row.replicate = rep;
      row.method = methods[k];
      row.truth_seed = truth_seed;
      try {
        Estimate est;
        double psi_used = 0.0, rho_used = 0.0;
        switch (methods[k]) {
          case Method::alce:
          case Method::unalce: {
            if (!chosen) chosen = choose_thresholds(tuning, job.sigma_n, options.base);
            if (!alce_result) {
              SolverConfig cfg = options.base;
              cfg.psi = chosen->psi;
              cfg.rho = chosen->rho;
              alce_result = alce_solve(job.sigma_n, cfg);
            }
            psi_used = chosen->psi;
            rho_used = chosen->rho;
            est = methods[k] == Method::unalce
                      ? unalce_from_alce(alce_result->first, alce_result->second)
                      : alce_result->first;
            break;
          }
          case Method::poet: {
            rho_used = choose_poet_rho(tuning, options, job, poet_rank);
            est = poet_estimate(job.sigma_n, poet_rank, rho_used);
            break;
          }
          case Method::sample: {
            // L empty, S = Sigma_n: the trivial decomposition of the input.
            est.low_rank = LowRankComponent::zero(job.sigma_n.dim());
            est.sparse = SparseComponent::from_matrix(job.sigma_n);
            est.sigma = job.sigma_n;
            est.method = Method::sample;
            break;
          }
        }
        const double gamma =
            psi_used > 0.0 ? rho_used / psi_used : 1.0;
        row.metrics = compute_metrics(est, job.truth, job.sigma_n, gamma);
        row.psi_used = psi_used;
        row.rho_used = rho_used;
        row.r_hat = est.rank();
        row.nz = est.sparse.nonzero_count();
        row.converged = est.converged;
        row.solver_iters = est.solver_iters;
      } catch (const Error& e) {
        row.ok = false;
        row.error = e.what();
      }
    }
  });

  for (const ReplicateRow& row : table.rows) {
    if (!row.ok) ++table.failed_rows;
  }
  return table;
}

}  // namespace lrscov
