// Command-line front end: fit, simulate, tune, predict, evaluate.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "miscls/dataset.hpp"
#include "miscls/fitters.hpp"
#include "miscls/inference.hpp"
#include "miscls/predict.hpp"
#include "miscls/rng.hpp"
#include "miscls/serialize.hpp"
#include "miscls/simulate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonFlags {
  std::string out_dir = ".";
  int threads = 0;
  std::string method = "parametric";
  std::string penalty = "scad";
  double penalty_a = 0.0;
  std::string link = "logit";
  std::string criterion = "gcv";
  bool pca = false;
  double pca_threshold = 0.90;
  double kernel_h = 0.0;
  double kernel_omega = -1.0;
  double path_ratio = 0.95;
  double path_c = 0.5;
  double inner_tol = 1e-7;
  int max_inner_iter = 5000;
  bool standardize = false;
};

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("MISCLS_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

void add_model_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--method", f.method, "naive|parametric|semiparametric");
  cmd->add_option("--penalty", f.penalty, "scad|mcp|l1");
  cmd->add_option("--penalty-a", f.penalty_a, "penalty shape parameter override");
  cmd->add_option("--link", f.link, "logit|probit|cloglog");
  cmd->add_option("--criterion", f.criterion, "gcv|bic");
  cmd->add_flag("--pca", f.pca, "PCA pre-reduction of continuous covariates");
  cmd->add_option("--pca-threshold", f.pca_threshold, "retained variance fraction");
  cmd->add_option("--kernel-h", f.kernel_h, "fixed kernel bandwidth (overrides the grid)");
  cmd->add_option("--kernel-omega", f.kernel_omega, "fixed discrete smoothing (overrides the grid)");
  cmd->add_option("--path-ratio", f.path_ratio, "lambda grid ratio, in [0.9,1)");
  cmd->add_option("--path-c", f.path_c, "target constant for lambda_N");
  cmd->add_option("--inner-tol", f.inner_tol, "proximal-gradient stopping tolerance");
  cmd->add_option("--max-inner-iter", f.max_inner_iter, "proximal-gradient iteration cap");
  cmd->add_flag("--standardize", f.standardize, "z-score continuous covariates");
  cmd->add_option("--out-dir", f.out_dir, "output directory");
  cmd->add_option("--threads", f.threads, "worker threads (env MISCLS_THREADS fallback)");
}

miscls::FitOptions to_fit_options(const CommonFlags& f) {
  miscls::FitOptions opt;
  opt.link = miscls::link_from_string(f.link);
  opt.penalty = miscls::penalty_from_string(f.penalty);
  opt.penalty_a = f.penalty_a;
  opt.criterion = miscls::criterion_from_string(f.criterion);
  opt.path.varsigma = f.path_ratio;
  opt.path.c = f.path_c;
  opt.path.inner_tol = f.inner_tol;
  opt.path.max_inner_iter = f.max_inner_iter;
  opt.use_pca = f.pca;
  opt.pca_variance_threshold = f.pca_threshold;
  if (f.kernel_h > 0.0) opt.fixed_h = f.kernel_h;
  if (f.kernel_omega >= 0.0) opt.fixed_omega = f.kernel_omega;
  opt.standardize = f.standardize;
  opt.threads = resolve_threads(f.threads);
  return opt;
}

json flags_to_json(const CommonFlags& f) {
  return json{{"method", f.method},
              {"penalty", f.penalty},
              {"penalty_a", f.penalty_a},
              {"link", f.link},
              {"criterion", f.criterion},
              {"pca", f.pca},
              {"pca_threshold", f.pca_threshold},
              {"kernel_h", f.kernel_h},
              {"kernel_omega", f.kernel_omega},
              {"path_ratio", f.path_ratio},
              {"path_c", f.path_c},
              {"inner_tol", f.inner_tol},
              {"max_inner_iter", f.max_inner_iter},
              {"standardize", f.standardize},
              {"threads", resolve_threads(f.threads)},
              {"out_dir", f.out_dir}};
}

void write_run_config(const std::string& out_dir, const std::string& subcommand, json config) {
  config["subcommand"] = subcommand;
  config["version"] = miscls::kLibraryVersion;
  config["rng"] = miscls::kRngDescription;
  miscls::atomic_write_file(out_dir + "/run.json", config.dump(2) + "\n");
}

void require_file(const std::string& path) {
  if (!fs::exists(path)) throw UsageError("file not found: " + path);
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory: " + dir);
}

miscls::Dataset load_dataset(const std::string& data_path, const std::string& schema_path) {
  require_file(data_path);
  miscls::ColumnSchema schema;
  if (!schema_path.empty()) {
    require_file(schema_path);
    schema = miscls::load_schema(schema_path);
  }
  return miscls::load_csv_dataset(data_path, schema);
}

// Reorders CSV columns to the fitted model's column order, by name when names
// match, positionally otherwise.
Eigen::MatrixXd align_covariates(const miscls::CovariateTable& table,
                                 const std::vector<std::string>& wanted) {
  if (table.column_names.size() != wanted.size()) {
    throw std::invalid_argument("covariate width " + std::to_string(table.column_names.size()) +
                                " does not match the fitted model (" +
                                std::to_string(wanted.size()) + " columns)");
  }
  std::vector<int> order(wanted.size());
  bool by_name = true;
  for (std::size_t k = 0; k < wanted.size(); ++k) {
    auto it = std::find(table.column_names.begin(), table.column_names.end(), wanted[k]);
    if (it == table.column_names.end()) {
      by_name = false;
      break;
    }
    order[k] = static_cast<int>(it - table.column_names.begin());
  }
  if (!by_name) {
    for (std::size_t k = 0; k < wanted.size(); ++k) order[k] = static_cast<int>(k);
  }
  Eigen::MatrixXd z(table.z.rows(), table.z.cols());
  for (std::size_t k = 0; k < order.size(); ++k) z.col(static_cast<int>(k)) = table.z.col(order[k]);
  return z;
}

int run_fit(const CommonFlags& f, const std::string& data_path, const std::string& schema_path,
            bool trace_only) {
  ensure_out_dir(f.out_dir);
  const miscls::Dataset ds = load_dataset(data_path, schema_path);
  const miscls::FitOptions opt = to_fit_options(f);
  const miscls::Method method = miscls::method_from_string(f.method);
  const miscls::FitResult fit = miscls::fit(ds, method, opt);

  json config = flags_to_json(f);
  config["data"] = data_path;
  if (!schema_path.empty()) config["schema"] = schema_path;

  if (trace_only) {
    miscls::atomic_write_file(f.out_dir + "/tuning_trace.csv",
                              miscls::tuning_trace_csv(fit.tuning_trace));
    write_run_config(f.out_dir, "tune", std::move(config));
    std::cout << "wrote " << f.out_dir << "/tuning_trace.csv (" << fit.tuning_trace.size()
              << " candidates)\n";
    return 0;
  }

  miscls::CovarianceEstimate cov;
  cov.cov = fit.covariance;
  cov.se = fit.se;
  const auto intervals = miscls::confidence_intervals(cov, fit, 0.95);
  miscls::atomic_write_file(f.out_dir + "/fit.json", miscls::fit_result_to_json(fit).dump(2) + "\n");
  miscls::atomic_write_file(f.out_dir + "/coefficients.csv", miscls::coefficients_csv(fit, intervals));
  write_run_config(f.out_dir, "fit", std::move(config));
  std::cout << "method=" << miscls::to_string(fit.method) << " lambda=" << fit.lambda
            << " support=" << fit.support.size() << " -> " << f.out_dir << "/fit.json\n";
  return 0;
}

int run_simulate(const CommonFlags& f, const std::string& setting_name, int n, double delta, int m,
                 std::uint64_t seed) {
  ensure_out_dir(f.out_dir);
  const miscls::SimSetting st = [&] {
    miscls::SimSetting s = miscls::SimSetting::by_name(setting_name, n);
    s.link = miscls::link_from_string(f.link);
    return s;
  }();
  miscls::RunSpec spec;
  spec.method = miscls::method_from_string(f.method);
  spec.options = to_fit_options(f);
  spec.options.threads = 1;
  spec.replications = m;
  spec.delta = delta;
  spec.base_seed = seed;
  spec.threads = resolve_threads(f.threads);
  const miscls::RunOutput out = miscls::run_replications(st, spec);

  json config = flags_to_json(f);
  config["setting"] = setting_name;
  config["n"] = n;
  config["delta"] = delta;
  config["replications"] = m;
  config["seed"] = seed;

  json metrics = miscls::metrics_report_to_json(out.report, st);
  metrics["delta"] = delta;
  metrics["method"] = f.method;
  metrics["penalty"] = f.penalty;
  metrics["criterion"] = f.criterion;
  miscls::atomic_write_file(f.out_dir + "/metrics.json", metrics.dump(2) + "\n");
  miscls::atomic_write_file(f.out_dir + "/replications.csv",
                            miscls::replications_csv(out.records, st));
  write_run_config(f.out_dir, "simulate", std::move(config));
  std::cout << "setting " << setting_name << " M=" << out.report.m_used << "/" << m
            << " AME=" << out.report.ame << " AMR=" << out.report.amr << " -> " << f.out_dir
            << "/metrics.json\n";
  return 0;
}

int run_predict(const CommonFlags& f, const std::string& fit_path, const std::string& data_path) {
  ensure_out_dir(f.out_dir);
  require_file(fit_path);
  require_file(data_path);
  const miscls::FitResult fit = miscls::load_fit_result(fit_path);
  const miscls::CovariateTable table = miscls::load_covariate_csv(data_path);
  const Eigen::MatrixXd z = align_covariates(table, fit.column_names);
  const miscls::Prediction pred = miscls::predict(fit, z);

  std::ostringstream csv;
  csv.precision(12);
  csv << "mu,y_hat\n";
  for (Eigen::Index i = 0; i < pred.mu.size(); ++i) {
    csv << pred.mu(i) << ',' << pred.y_hat[i] << '\n';
  }
  miscls::atomic_write_file(f.out_dir + "/predictions.csv", csv.str());
  json config = flags_to_json(f);
  config["fit"] = fit_path;
  config["data"] = data_path;
  write_run_config(f.out_dir, "predict", std::move(config));
  std::cout << "predicted " << pred.mu.size() << " rows -> " << f.out_dir << "/predictions.csv\n";
  return 0;
}

int run_evaluate(const CommonFlags& f, const std::string& fit_path, const std::string& data_path) {
  ensure_out_dir(f.out_dir);
  require_file(fit_path);
  require_file(data_path);
  const miscls::FitResult fit = miscls::load_fit_result(fit_path);
  const miscls::CovariateTable table = miscls::load_covariate_csv(data_path);
  for (int v : table.y) {
    if (v < 0) throw std::invalid_argument("evaluate: test file needs a complete y column");
  }
  const Eigen::MatrixXd z = align_covariates(table, fit.column_names);
  const miscls::Prediction pred = miscls::predict(fit, z);
  const miscls::EvalMetrics m = miscls::prediction_metrics(pred, table.y);

  json out = {{"acc", m.acc}, {"brier", m.brier}, {"n", table.y.size()},
              {"method", miscls::to_string(fit.method)}, {"version", miscls::kLibraryVersion}};
  if (m.auc) {
    out["auc"] = *m.auc;
  } else {
    out["auc"] = nullptr;
  }
  miscls::atomic_write_file(f.out_dir + "/evaluation.json", out.dump(2) + "\n");
  json config = flags_to_json(f);
  config["fit"] = fit_path;
  config["data"] = data_path;
  write_run_config(f.out_dir, "evaluate", std::move(config));
  std::cout << "ACC=" << m.acc << " Brier=" << m.brier;
  if (m.auc) std::cout << " AUC=" << *m.auc;
  std::cout << " -> " << f.out_dir << "/evaluation.json\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"penalized binary regression with misclassified responses"};
  app.require_subcommand(1);

  CommonFlags fit_flags, tune_flags, sim_flags, pred_flags, eval_flags;
  std::string fit_data, fit_schema, tune_data, tune_schema;
  std::string sim_setting = "I";
  int sim_n = 1000, sim_m = 50;
  double sim_delta = 0.5;
  std::uint64_t sim_seed = 1;
  std::string pred_fit, pred_data, eval_fit, eval_data;

  CLI::App* cmd_fit = app.add_subcommand("fit", "fit one dataset");
  cmd_fit->add_option("--data", fit_data, "CSV with y_star[, y], z columns")->required();
  cmd_fit->add_option("--schema", fit_schema, "JSON sidecar naming discrete columns");
  add_model_flags(cmd_fit, fit_flags);

  CLI::App* cmd_tune = app.add_subcommand("tune", "dump the tuning grid diagnostics");
  cmd_tune->add_option("--data", tune_data, "CSV with y_star[, y], z columns")->required();
  cmd_tune->add_option("--schema", tune_schema, "JSON sidecar naming discrete columns");
  add_model_flags(cmd_tune, tune_flags);

  CLI::App* cmd_sim = app.add_subcommand("simulate", "Monte Carlo replications");
  cmd_sim->add_option("--setting", sim_setting, "I|II|III|IV|V");
  cmd_sim->add_option("--n", sim_n, "sample size");
  cmd_sim->add_option("--delta", sim_delta, "validation ratio in (0,1]");
  cmd_sim->add_option("--M", sim_m, "number of replications");
  cmd_sim->add_option("--seed", sim_seed, "base seed; replication j uses seed+j");
  add_model_flags(cmd_sim, sim_flags);

  CLI::App* cmd_pred = app.add_subcommand("predict", "predict on new covariates");
  cmd_pred->add_option("--fit", pred_fit, "fit.json from a previous run")->required();
  cmd_pred->add_option("--data", pred_data, "CSV of covariates")->required();
  add_model_flags(cmd_pred, pred_flags);

  CLI::App* cmd_eval = app.add_subcommand("evaluate", "test-set ACC/Brier/AUC");
  cmd_eval->add_option("--fit", eval_fit, "fit.json from a previous run")->required();
  cmd_eval->add_option("--data", eval_data, "CSV with y and covariates")->required();
  add_model_flags(cmd_eval, eval_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cmd_fit->parsed()) return run_fit(fit_flags, fit_data, fit_schema, false);
    if (cmd_tune->parsed()) return run_fit(tune_flags, tune_data, tune_schema, true);
    if (cmd_sim->parsed()) {
      return run_simulate(sim_flags, sim_setting, sim_n, sim_delta, sim_m, sim_seed);
    }
    if (cmd_pred->parsed()) return run_predict(pred_flags, pred_fit, pred_data);
    if (cmd_eval->parsed()) return run_evaluate(eval_flags, eval_fit, eval_data);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
