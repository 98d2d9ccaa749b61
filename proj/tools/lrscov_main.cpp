// lrscov: low rank plus sparse covariance estimation from the command line.
//
// Subcommands:
//   estimate  fit one estimate at fixed thresholds, write a JSON report
//   grid      threshold selection over a (psi, rho) grid (MC or CV)
//   simulate  benchmark harness over the built-in simulated settings
//
// Exit codes: 0 ok, 2 input error, 3 numerical failure, 4 no positive
// definite threshold pair.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lrscov/bench.hpp"
#include "lrscov/csv.hpp"
#include "lrscov/estimators.hpp"
#include "lrscov/linalg.hpp"
#include "lrscov/metrics.hpp"
#include "lrscov/simgen.hpp"
#include "lrscov/tuning.hpp"

namespace {

using nlohmann::json;
using namespace lrscov;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitNoFeasible = 4;

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

json make_manifest(const std::string& command, json config,
                   std::uint64_t seed) {
  return json{{"command", command},
              {"config", std::move(config)},
              {"seed", seed},
              {"version", LRSCOV_VERSION},
              {"timestamp", iso_timestamp()}};
}

void write_json(const std::string& path, const json& j) {
  atomic_write_text(path, j.dump(2) + "\n");
}

json finite_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

// ---------------------------------------------------------------------------
// Shared input handling

struct InputOptions {
  std::string path;
  bool is_data = false;  // rows are observations; form the sample covariance
  bool center = true;
};

struct LoadedInput {
  SymmetricMatrix sigma_n;
  std::optional<Eigen::MatrixXd> data;
  std::vector<std::string> labels;  // one per variable; defaults v1..vp
  int n_obs = 0;                    // 0 when the input was already a matrix
};

LoadedInput load_input(const InputOptions& in) {
  const CsvMatrix csv = read_csv_matrix(in.path);
  LoadedInput out;
  if (in.is_data) {
    out.data = csv.values;
    out.sigma_n = sample_estimate(csv.values, in.center);
    out.n_obs = static_cast<int>(csv.values.rows());
  } else {
    out.sigma_n = SymmetricMatrix::from_dense(csv.values);
  }
  const auto p = static_cast<std::size_t>(out.sigma_n.dim());
  out.labels = csv.labels;
  if (out.labels.size() != p) {
    out.labels.resize(p);
    for (std::size_t j = 0; j < p; ++j)
      out.labels[j] = "v" + std::to_string(j + 1);
  }
  return out;
}

// Per-variable degree, communality and idiosyncratic proportion, plus the
// top-5 variables by each.
json variable_report(const Estimate& est,
                     const std::vector<std::string>& labels) {
  const Eigen::Index p = est.dim();
  const SymmetricMatrix L = est.low_rank.reconstruct();

  std::vector<int> degree(p, 0);
  for (const auto& [i, j] : est.sparse.support) {
    ++degree[i];
    ++degree[j];
  }

  json vars = json::array();
  std::vector<double> communality(p), idiosyncratic(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double sjj = est.sigma(j, j);
    communality[j] = sjj != 0.0 ? L(j, j) / sjj : 0.0;
    idiosyncratic[j] = sjj != 0.0 ? est.sparse.entries(j, j) / sjj : 0.0;
    vars.push_back(json{{"label", labels[j]},
                        {"degree", degree[j]},
                        {"communality", communality[j]},
                        {"idiosyncratic", idiosyncratic[j]}});
  }

  const auto top5 = [&](auto key) {
    std::vector<Eigen::Index> idx(p);
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a,
                                                 Eigen::Index b) {
      return key(a) > key(b);
    });
    json out = json::array();
    for (Eigen::Index k = 0; k < std::min<Eigen::Index>(5, p); ++k)
      out.push_back(labels[idx[k]]);
    return out;
  };

  return json{{"variables", vars},
              {"top5_by_degree",
               top5([&](Eigen::Index i) { return double(degree[i]); })},
              {"top5_by_communality",
               top5([&](Eigen::Index i) { return communality[i]; })},
              {"top5_by_idiosyncratic",
               top5([&](Eigen::Index i) { return idiosyncratic[i]; })}};
}

json summary_to_json(const EstimateSummary& s) {
  return json{{"r_hat", s.r_hat},
              {"nz", s.nz},
              {"perc_nz", s.perc_nz},
              {"theta_hat", s.theta_hat},
              {"rho_corr_hat", s.rho_corr_hat},
              {"sample_total_loss", s.sample_total_loss},
              {"cond_sigma", finite_or_null(s.cond_sigma)},
              {"cond_S", finite_or_null(s.cond_S)},
              {"cond_L", finite_or_null(s.cond_L)},
              {"spectral_sigma", s.spec_sigma},
              {"spectral_S", s.spec_S},
              {"spectral_L", s.spec_L}};
}

// ---------------------------------------------------------------------------
// estimate

struct EstimateArgs {
  InputOptions input;
  double psi = 0.0;
  double rho = 0.0;
  std::string method = "unalce";
  int rank = 0;  // POET only
  std::string poet_threshold = "soft";
  bool poet_correlation_scale = false;
  double epsilon = 1e-6;
  int max_iter = 5000;
  double alpha = 0.5;
  std::string out;
  std::string components_prefix;  // when set, write L/S/Sigma as CSV
};

int run_estimate(const EstimateArgs& args) {
  const LoadedInput in = load_input(args.input);
  const Method method = method_from_string(args.method);

  Estimate est;
  std::optional<SolverState> state;
  if (method == Method::alce || method == Method::unalce) {
    SolverConfig cfg{args.psi, args.rho, args.epsilon, args.max_iter};
    auto [alce, st] = alce_solve(in.sigma_n, cfg);
    state = std::move(st);
    est = method == Method::unalce ? unalce_from_alce(alce, *state)
                                   : std::move(alce);
  } else if (method == Method::poet) {
    est = poet_estimate(in.sigma_n, args.rank, args.rho,
                        threshold_kind_from_string(args.poet_threshold),
                        args.poet_correlation_scale);
  } else {
    throw InputError("estimate supports methods unalce, alce and poet");
  }

  json report;
  report["manifest"] = make_manifest(
      "estimate",
      json{{"input", args.input.path},
           {"data", args.input.is_data},
           {"center", args.input.center},
           {"psi", args.psi},
           {"rho", args.rho},
           {"method", args.method},
           {"rank", args.rank},
           {"epsilon", args.epsilon},
           {"max_iter", args.max_iter},
           {"alpha", args.alpha}},
      0);
  report["p"] = est.dim();
  if (in.n_obs > 0) report["n"] = in.n_obs;
  report["method"] = args.method;
  report["effective_method"] = std::string(method_name(est.method));
  report["unshrink_noop"] = est.unshrink_noop;
  report["converged"] = est.converged;
  report["solver_iters"] = est.solver_iters;
  report["summary"] = summary_to_json(summarize_estimate(est, in.sigma_n));
  report.update(variable_report(est, in.labels));

  if (est.rank() > 0) {
    const DiagnosticsReport diag = incoherence_diagnostics(
        est.low_rank, est.sparse, args.alpha,
        in.n_obs > 0 ? in.n_obs : static_cast<int>(est.dim()));
    report["diagnostics"] =
        json{{"xi_lower", diag.xi_lower},
             {"xi_surrogate", diag.xi_surrogate},
             {"mu_surrogate", diag.mu_surrogate},
             {"psi_theoretical", diag.psi_theoretical},
             {"alpha", diag.alpha},
             {"gamma_range",
              diag.gamma_range_empty
                  ? json(nullptr)
                  : json{{"lower", diag.gamma_lower},
                         {"upper", diag.gamma_upper}}}};
  }
  if ((method == Method::alce || method == Method::unalce) &&
      est.rank() > 0 && !est.unshrink_noop) {
    const PdConditionsReport pd = pd_conditions(est, est.psi);
    report["pd_conditions"] =
        json{{"psi_breve", pd.psi_breve},
             {"lambda_r_L_alce", pd.lambda_r_L_alce},
             {"lambda_r_L_unalce", pd.lambda_r_L_unalce},
             {"lambda_p_S_alce", pd.lambda_p_S_alce},
             {"lambda_p_S_unalce", pd.lambda_p_S_unalce},
             {"lambda_p_sigma_alce", pd.lambda_p_sigma_alce},
             {"lambda_p_sigma_unalce", pd.lambda_p_sigma_unalce},
             {"eigenvalue_shift_error", pd.eigenvalue_shift_error},
             {"max_basis_row_norm_sq", pd.max_basis_row_norm_sq},
             {"margin_S", pd.margin_S},
             {"margin_sigma", pd.margin_sigma},
             {"margin_S_guaranteed", pd.margin_S_guaranteed},
             {"margin_sigma_guaranteed", pd.margin_sigma_guaranteed}};
  }

  if (!args.components_prefix.empty()) {
    write_csv_matrix(args.components_prefix + "_sigma.csv", est.sigma.mat(),
                     in.labels);
    write_csv_matrix(args.components_prefix + "_L.csv",
                     est.low_rank.reconstruct().mat(), in.labels);
    write_csv_matrix(args.components_prefix + "_S.csv",
                     est.sparse.entries.mat(), in.labels);
    report["components"] =
        json{{"sigma", args.components_prefix + "_sigma.csv"},
             {"L", args.components_prefix + "_L.csv"},
             {"S", args.components_prefix + "_S.csv"}};
  }

  write_json(args.out, report);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// grid

struct GridArgs {
  InputOptions input;
  std::vector<double> psi_grid;
  std::vector<double> rho_grid;
  std::vector<double> psi_range;  // min,max,count (log-spaced)
  std::vector<double> rho_range;
  std::string criterion = "mc";
  int folds = 5;
  std::string method = "unalce";  // CV refit method
  int rank = 0;                   // POET CV rank
  double epsilon = 1e-6;
  int max_iter = 5000;
  int threads = 0;
  std::string out;
};

std::vector<double> resolve_axis(const std::vector<double>& explicit_values,
                                 const std::vector<double>& range,
                                 const char* name) {
  if (!explicit_values.empty() && !range.empty()) {
    throw InputError(std::string("give either --") + name + "-grid or --" +
                     name + "-range, not both");
  }
  if (!explicit_values.empty()) return explicit_values;
  if (range.empty()) {
    throw InputError(std::string("missing --") + name + "-grid or --" + name +
                     "-range");
  }
  if (range.size() != 3) {
    throw InputError(std::string("--") + name +
                     "-range expects min,max,count");
  }
  const double lo = range[0], hi = range[1];
  const int count = static_cast<int>(range[2]);
  if (!(lo > 0.0) || !(hi > lo) || count < 2) {
    throw InputError(std::string("--") + name +
                     "-range needs 0 < min < max and count >= 2");
  }
  std::vector<double> out(count);
  for (int k = 0; k < count; ++k) {
    out[k] = std::exp(std::log(lo) +
                      (std::log(hi) - std::log(lo)) * k / (count - 1));
  }
  return out;
}

int run_grid(const GridArgs& args) {
  const LoadedInput in = load_input(args.input);

  ThresholdGrid grid;
  grid.psi_values = resolve_axis(args.psi_grid, args.psi_range, "psi");
  grid.rho_values = resolve_axis(args.rho_grid, args.rho_range, "rho");

  SolverConfig base;
  base.epsilon = args.epsilon;
  base.max_iter = args.max_iter;
  base.psi = base.rho = 1.0;  // replaced per pair

  SelectionResult sel;
  if (args.criterion == "mc") {
    sel = select_by_mc(in.sigma_n, grid, base, args.threads);
  } else if (args.criterion == "cv") {
    if (!in.data) {
      throw InputError(
          "cross-validation needs raw observations: pass --data with a "
          "rows-as-observations CSV");
    }
    CvOptions cv;
    cv.poet_rank = args.rank;
    cv.threads = args.threads;
    sel = cross_validate(*in.data, grid, args.folds,
                         method_from_string(args.method), base, cv);
  } else {
    throw InputError("unknown criterion: " + args.criterion);
  }

  const std::filesystem::path out_path(args.out);
  std::filesystem::path table_path = out_path;
  table_path.replace_extension();
  table_path += "_table.csv";

  std::vector<std::vector<std::string>> rows;
  rows.reserve(sel.table.size());
  for (const PairResult& r : sel.table) {
    rows.push_back({format_double(r.psi), format_double(r.rho),
                    format_double(r.criterion), format_double(r.theta_hat),
                    std::to_string(r.r_hat), std::to_string(r.nz),
                    r.pd ? "1" : "0"});
  }
  write_csv_table(table_path.string(),
                  {"psi", "rho", "criterion", "theta_hat", "r_hat", "nz", "pd"},
                  rows);

  json report;
  report["manifest"] = make_manifest(
      "grid",
      json{{"input", args.input.path},
           {"data", args.input.is_data},
           {"psi_grid", grid.psi_values},
           {"rho_grid", grid.rho_values},
           {"criterion", args.criterion},
           {"folds", args.folds},
           {"method", args.method},
           {"rank", args.rank},
           {"epsilon", args.epsilon},
           {"max_iter", args.max_iter}},
      0);
  report["selected"] = json{{"psi", sel.best_psi},
                            {"rho", sel.best_rho},
                            {"criterion", sel.criterion_value}};
  report["table"] = table_path.string();
  write_json(args.out, report);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  int setting = 0;  // 0: explicit fields below
  int p = 0, n = 0, r = 0;
  double theta = 0.0, cond = 1.0, prop_s = 0.0, rho_corr = 0.0, tau = 1.0;
  double scale = 1.0;
  int replicates = 10;
  std::uint64_t seed = 1;
  std::string methods = "unalce,poet";
  double psi = 0.0, rho = 0.0;    // fixed thresholds (0 = use grid)
  std::vector<double> psi_range;  // min,max,count for per-replicate MC search
  std::vector<double> rho_range;
  int poet_rank = -1;
  bool shared_truth = false;
  double epsilon = 1e-6;
  int max_iter = 5000;
  int threads = 0;
  std::string out;
};

std::vector<Method> parse_methods(const std::string& csv) {
  std::vector<Method> out;
  std::string token;
  std::stringstream ss(csv);
  while (std::getline(ss, token, ',')) {
    if (!token.empty()) out.push_back(method_from_string(token));
  }
  if (out.empty()) throw InputError("no methods given");
  return out;
}

int run_simulate(const SimulateArgs& args) {
  SettingSpec spec;
  if (args.setting > 0) {
    spec = SettingSpec::preset(args.setting);
  } else {
    spec.p = args.p;
    spec.n = args.n;
    spec.r = args.r;
    spec.theta = args.theta;
    spec.c = args.cond;
    spec.prop_s = args.prop_s;
    spec.rho_corr = args.rho_corr;
    spec.tau = args.tau;
  }
  if (args.scale != 1.0) spec = spec.scaled(args.scale);
  spec.replicates = args.replicates;
  spec.validate();

  TuningInput tuning = FixedThresholds{args.psi, args.rho};
  if (!(args.psi > 0.0) || !(args.rho > 0.0)) {
    if (args.psi_range.empty() || args.rho_range.empty()) {
      throw InputError(
          "simulate needs either fixed --psi and --rho or both --psi-range "
          "and --rho-range");
    }
    McGridSearch search;
    search.grid.psi_values = resolve_axis({}, args.psi_range, "psi");
    search.grid.rho_values = resolve_axis({}, args.rho_range, "rho");
    tuning = std::move(search);
  }

  ReplicateOptions opt;
  opt.base.epsilon = args.epsilon;
  opt.base.max_iter = args.max_iter;
  opt.base.psi = opt.base.rho = 1.0;
  opt.fresh_truth_per_replicate = !args.shared_truth;
  opt.poet_rank = args.poet_rank;
  opt.threads = args.threads;

  const std::vector<Method> methods = parse_methods(args.methods);
  const ReplicateTable table =
      run_replicates(spec, methods, tuning, args.seed, opt);

  namespace fs = std::filesystem;
  fs::create_directories(args.out);

  // Per-replicate rows.
  std::vector<std::string> header = {"replicate", "method",   "truth_seed",
                                     "ok",        "psi_used", "rho_used",
                                     "r_hat",     "nz",       "converged",
                                     "solver_iters"};
  const std::vector<std::string> metric_names = metric_column_names();
  header.insert(header.end(), metric_names.begin(), metric_names.end());

  std::vector<std::vector<std::string>> rows;
  rows.reserve(table.rows.size());
  for (const ReplicateRow& r : table.rows) {
    std::vector<std::string> row = {std::to_string(r.replicate),
                                    std::string(method_name(r.method)),
                                    std::to_string(r.truth_seed),
                                    r.ok ? "1" : "0",
                                    format_double(r.psi_used),
                                    format_double(r.rho_used),
                                    std::to_string(r.r_hat),
                                    std::to_string(r.nz),
                                    r.converged ? "1" : "0",
                                    std::to_string(r.solver_iters)};
    if (r.ok) {
      for (const auto& v : metric_column_values(r.metrics))
        row.push_back(format_optional(v));
    } else {
      row.insert(row.end(), metric_names.size(), "NA");
    }
    rows.push_back(std::move(row));
  }
  write_csv_table((fs::path(args.out) / "replicates.csv").string(), header,
                  rows);

  // Aggregates.
  const auto aggregates = table.aggregates();
  std::vector<std::vector<std::string>> agg_rows;
  for (const auto& [method, metrics] : aggregates) {
    for (const auto& [metric, cell] : metrics) {
      agg_rows.push_back({method, metric, format_double(cell.mean),
                          format_double(cell.stddev),
                          std::to_string(cell.count)});
    }
  }
  write_csv_table((fs::path(args.out) / "aggregate.csv").string(),
                  {"method", "metric", "mean", "stddev", "count"}, agg_rows);

  json manifest = make_manifest(
      "simulate",
      json{{"setting", args.setting},
           {"p", spec.p},
           {"n", spec.n},
           {"r", spec.r},
           {"theta", spec.theta},
           {"c", spec.c},
           {"prop_s", spec.prop_s},
           {"rho_corr", spec.rho_corr},
           {"tau", spec.tau},
           {"scale", args.scale},
           {"replicates", spec.replicates},
           {"methods", args.methods},
           {"psi", args.psi},
           {"rho", args.rho},
           {"psi_range", args.psi_range},
           {"rho_range", args.rho_range},
           {"poet_rank", args.poet_rank},
           {"shared_truth", args.shared_truth},
           {"epsilon", args.epsilon},
           {"max_iter", args.max_iter}},
      args.seed);
  manifest["failed_rows"] = table.failed_rows;
  write_json((fs::path(args.out) / "manifest.json").string(), manifest);

  std::cout << "wrote " << table.rows.size() << " rows ("
            << table.failed_rows << " failed) to " << args.out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"low rank plus sparse covariance estimation"};
  app.require_subcommand(1);

  EstimateArgs est;
  CLI::App* cmd_est = app.add_subcommand(
      "estimate", "fit one estimate at fixed thresholds");
  cmd_est->add_option("--input", est.input.path, "input CSV")->required();
  cmd_est->add_flag("--data", est.input.is_data,
                    "input rows are observations, not a covariance matrix");
  cmd_est->add_flag("!--no-center", est.input.center,
                    "do not center observation columns");
  cmd_est->add_option("--psi", est.psi, "nuclear threshold");
  cmd_est->add_option("--rho", est.rho, "l1 threshold")->required();
  cmd_est->add_option("--method", est.method, "unalce|alce|poet");
  cmd_est->add_option("--rank", est.rank, "POET rank");
  cmd_est->add_option("--poet-threshold", est.poet_threshold, "soft|hard");
  cmd_est->add_flag("--poet-correlation-scale", est.poet_correlation_scale,
                    "threshold POET residuals on the correlation scale");
  cmd_est->add_option("--epsilon", est.epsilon, "solver precision");
  cmd_est->add_option("--max-iter", est.max_iter, "solver iteration cap");
  cmd_est->add_option("--alpha", est.alpha, "spikiness exponent in [0,1]");
  cmd_est->add_option("--out", est.out, "output JSON path")->required();
  cmd_est->add_option("--components-prefix", est.components_prefix,
                      "write sigma/L/S CSV files with this path prefix");

  GridArgs grid;
  CLI::App* cmd_grid =
      app.add_subcommand("grid", "threshold selection over a grid");
  cmd_grid->add_option("--input", grid.input.path, "input CSV")->required();
  cmd_grid->add_flag("--data", grid.input.is_data,
                     "input rows are observations");
  cmd_grid->add_flag("!--no-center", grid.input.center,
                     "do not center observation columns");
  cmd_grid->add_option("--psi-grid", grid.psi_grid,
                       "explicit psi values (comma separated)")
      ->delimiter(',');
  cmd_grid->add_option("--rho-grid", grid.rho_grid,
                       "explicit rho values (comma separated)")
      ->delimiter(',');
  cmd_grid->add_option("--psi-range", grid.psi_range,
                       "log-spaced psi axis: min,max,count")
      ->delimiter(',');
  cmd_grid->add_option("--rho-range", grid.rho_range,
                       "log-spaced rho axis: min,max,count")
      ->delimiter(',');
  cmd_grid->add_option("--criterion", grid.criterion, "mc|cv");
  cmd_grid->add_option("--folds", grid.folds, "CV folds");
  cmd_grid->add_option("--method", grid.method, "CV refit method");
  cmd_grid->add_option("--rank", grid.rank, "POET rank for CV");
  cmd_grid->add_option("--epsilon", grid.epsilon, "solver precision");
  cmd_grid->add_option("--max-iter", grid.max_iter, "solver iteration cap");
  cmd_grid->add_option("--threads", grid.threads, "worker threads (0 = auto)");
  cmd_grid->add_option("--out", grid.out, "output JSON path")->required();

  SimulateArgs sim;
  CLI::App* cmd_sim = app.add_subcommand("simulate", "benchmark harness");
  cmd_sim->add_option("--setting", sim.setting, "built-in setting 1..5");
  cmd_sim->add_option("--p", sim.p, "dimension");
  cmd_sim->add_option("--n", sim.n, "sample size");
  cmd_sim->add_option("--r", sim.r, "latent rank");
  cmd_sim->add_option("--theta", sim.theta, "latent variance share");
  cmd_sim->add_option("--cond-number", sim.cond, "condition number of L*");
  cmd_sim->add_option("--prop-s", sim.prop_s, "proportion of nonzero pairs");
  cmd_sim->add_option("--rho-corr", sim.rho_corr,
                      "residual covariance proportion");
  cmd_sim->add_option("--tau", sim.tau, "magnitude parameter");
  cmd_sim->add_option("--scale", sim.scale, "shrink p and n by this factor");
  cmd_sim->add_option("--replicates", sim.replicates, "number of replicates");
  cmd_sim->add_option("--seed", sim.seed, "base seed");
  cmd_sim->add_option("--methods", sim.methods,
                      "comma separated: unalce,alce,poet,sample");
  cmd_sim->add_option("--psi", sim.psi, "fixed nuclear threshold");
  cmd_sim->add_option("--rho", sim.rho, "fixed l1 threshold");
  cmd_sim->add_option("--psi-range", sim.psi_range,
                      "per-replicate MC search psi axis: min,max,count")
      ->delimiter(',');
  cmd_sim->add_option("--rho-range", sim.rho_range,
                      "per-replicate MC search rho axis: min,max,count")
      ->delimiter(',');
  cmd_sim->add_option("--poet-rank", sim.poet_rank,
                      "POET rank (-1 = true rank)");
  cmd_sim->add_flag("--shared-truth", sim.shared_truth,
                    "reuse one ground truth across replicates");
  cmd_sim->add_option("--epsilon", sim.epsilon, "solver precision");
  cmd_sim->add_option("--max-iter", sim.max_iter, "solver iteration cap");
  cmd_sim->add_option("--threads", sim.threads, "worker threads (0 = auto)");
  cmd_sim->add_option("--out", sim.out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_est->parsed()) return run_estimate(est);
    if (cmd_grid->parsed()) return run_grid(grid);
    if (cmd_sim->parsed()) return run_simulate(sim);
    std::cerr << "no subcommand given\n";
    return kExitInput;
  } catch (const NoFeasiblePairError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoFeasible;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
