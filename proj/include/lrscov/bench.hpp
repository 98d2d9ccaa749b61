#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lrscov/metrics.hpp"
#include "lrscov/simgen.hpp"
#include "lrscov/tuning.hpp"

namespace lrscov {

// Threshold input for a benchmark run: a fixed (psi, rho) pair, or a grid
// searched per replicate with the MC criterion.
struct FixedThresholds {
  double psi = 0.0;
  double rho = 0.0;
};

struct McGridSearch {
  ThresholdGrid grid;
};

using TuningInput = std::variant<FixedThresholds, McGridSearch>;

struct ReplicateOptions {
  SolverConfig base;  // epsilon / max_iter; psi and rho come from the tuning input
  bool fresh_truth_per_replicate = true;
  // POET rank; -1 means the true rank of the setting.
  int poet_rank = -1;
  // POET threshold; when absent, rho is selected per replicate by
  // cross-validation over poet_cv_grid, falling back to the fixed rho
  // (fixed tuning) or the grid's rho axis (grid tuning).
  std::optional<double> poet_rho;
  std::optional<ThresholdGrid> poet_cv_grid;
  int cv_folds = 5;
  int threads = 0;
};

struct ReplicateRow {
  int replicate = 0;
  Method method = Method::sample;
  std::uint64_t truth_seed = 0;
  bool ok = true;
  std::string error;   // set when the estimator failed and the row is void
  double psi_used = 0.0;
  double rho_used = 0.0;
  int r_hat = 0;
  long long nz = 0;
  bool converged = true;
  int solver_iters = 0;
  MetricsReport metrics;
};

struct AggregateCell {
  double mean = 0.0;
  double stddev = 0.0;
  int count = 0;  // rows with a defined value
};

struct ReplicateTable {
  std::vector<ReplicateRow> rows;  // replicate-major, method order preserved
  int failed_rows = 0;

  // Per (method, metric) mean and standard deviation over successful rows;
  // metrics with undefined values on some rows aggregate over the rest.
  std::map<std::string, std::map<std::string, AggregateCell>> aggregates()
      const;
};

// Names and values of the metric columns of a replicate row, in table order.
std::vector<std::string> metric_column_names();
std::vector<std::optional<double>> metric_column_values(const MetricsReport& m);

// Runs the full protocol: per replicate draw a ground truth (fresh per
// replicate by default) and a sample, form the sample covariance, fit every
// requested method, score the full metrics suite against the truth. The
// g_gamma metric is evaluated at gamma = rho/psi of the thresholds in use.
// Estimator failures void the row (ok = false) and are counted, not thrown.
ReplicateTable run_replicates(const SettingSpec& spec,
                              const std::vector<Method>& methods,
                              const TuningInput& tuning,
                              std::uint64_t base_seed,
                              const ReplicateOptions& options = {});

}  // namespace lrscov
