#include "miscls/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace miscls {

namespace {

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& arr) {
  Eigen::VectorXd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  return v;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& rows) {
  const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index c = r > 0 ? static_cast<Eigen::Index>(rows[0].size()) : 0;
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rows[i][j].get<double>();
  }
  return m;
}

}  // namespace

void atomic_write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + tmp);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
  }
}

nlohmann::json fit_result_to_json(const FitResult& fit) {
  nlohmann::json j;
  j["method"] = to_string(fit.method);
  j["link"] = to_string(fit.link);
  j["penalty"] = {{"kind", to_string(fit.penalty.kind)},
                  {"lambda", fit.penalty.lambda},
                  {"a", fit.penalty.a}};
  j["criterion"] = to_string(fit.criterion);
  j["lambda"] = fit.lambda;
  if (fit.h) j["h"] = *fit.h;
  if (fit.omega) j["omega"] = *fit.omega;
  j["beta0_star"] = fit.beta0_star;
  j["beta"] = vector_to_json(fit.beta);
  if (fit.nu) j["nu"] = vector_to_json(fit.nu->flatten());
  nlohmann::json support = nlohmann::json::array();
  for (int idx : fit.support) support.push_back(idx + 1);  // 1-based, matches z1..zp
  j["support"] = support;
  j["columns"] = fit.column_names;
  j["n"] = fit.n_rows;
  j["delta"] = fit.delta_ratio;
  j["covariance"] = matrix_to_json(fit.covariance);
  j["se"] = vector_to_json(fit.se);

  nlohmann::json trace = nlohmann::json::array();
  for (const auto& t : fit.tuning_trace) {
    nlohmann::json row = {{"lambda", t.lambda},       {"df", t.df},
                          {"deviance", t.deviance},   {"gcv", t.gcv},
                          {"bic", t.bic},             {"support_size", t.support_size},
                          {"excluded", t.excluded}};
    if (std::isfinite(t.h)) row["h"] = t.h;
    if (std::isfinite(t.omega)) row["omega"] = t.omega;
    trace.push_back(row);
  }
  j["tuning_trace"] = trace;

  const auto& d = fit.diagnostics;
  j["diagnostics"] = {{"outer_iterations", d.outer_iterations},
                      {"converged", d.converged},
                      {"clamp_events", d.clamp_events},
                      {"kernel_fallbacks", d.kernel_fallbacks},
                      {"gamma_sum_clamps", d.gamma_sum_clamps},
                      {"gamma_sum_warn_rows", d.gamma_sum_warn_rows},
                      {"excluded_candidates", d.excluded_candidates},
                      {"skipped_grid_points", d.skipped_grid_points},
                      {"cov_pseudo_inverse", d.cov_pseudo_inverse},
                      {"penalty_bias_flag", d.penalty_bias_flag}};
  j["version"] = kLibraryVersion;
  return j;
}

FitResult fit_result_from_json(const nlohmann::json& j) {
  FitResult fit;
  fit.method = method_from_string(j.at("method").get<std::string>());
  fit.link = link_from_string(j.at("link").get<std::string>());
  fit.penalty = PenaltySpec(penalty_from_string(j.at("penalty").at("kind").get<std::string>()),
                            j.at("penalty").at("lambda").get<double>(),
                            j.at("penalty").at("a").get<double>());
  fit.criterion = criterion_from_string(j.at("criterion").get<std::string>());
  fit.lambda = j.at("lambda").get<double>();
  if (j.contains("h")) fit.h = j.at("h").get<double>();
  if (j.contains("omega")) fit.omega = j.at("omega").get<double>();
  fit.beta0_star = j.at("beta0_star").get<double>();
  fit.beta = vector_from_json(j.at("beta"));
  if (j.contains("nu")) fit.nu = NuVector::from_flat(vector_from_json(j.at("nu")));
  for (const auto& idx : j.at("support")) fit.support.push_back(idx.get<int>() - 1);
  fit.column_names = j.at("columns").get<std::vector<std::string>>();
  fit.n_rows = j.at("n").get<int>();
  fit.delta_ratio = j.at("delta").get<double>();
  fit.covariance = matrix_from_json(j.at("covariance"));
  fit.se = vector_from_json(j.at("se"));
  return fit;
}

FitResult load_fit_result(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open fit result: " + path);
  nlohmann::json j;
  in >> j;
  return fit_result_from_json(j);
}

std::string coefficients_csv(const FitResult& fit, const std::vector<Interval>& intervals) {
  std::ostringstream out;
  out.precision(12);
  out << "coefficient,estimate,se,lo,hi\n";
  out << "(intercept)," << fit.beta0_star << ',' << fit.se(0) << ',' << intervals[0].lo << ','
      << intervals[0].hi << '\n';
  int k = 0;
  for (Eigen::Index jdx = 0; jdx < fit.beta.size(); ++jdx) {
    const std::string name = (static_cast<std::size_t>(jdx) < fit.column_names.size())
                                 ? fit.column_names[jdx]
                                 : ("z" + std::to_string(jdx + 1));
    if (fit.beta(jdx) != 0.0) {
      ++k;
      out << name << ',' << fit.beta(jdx) << ',' << fit.se(k) << ',' << intervals[k].lo << ','
          << intervals[k].hi << '\n';
    } else {
      out << name << ",0,,,\n";
    }
  }
  return out.str();
}

nlohmann::json metrics_report_to_json(const MetricsReport& report, const SimSetting& st) {
  nlohmann::json j;
  j["setting"] = st.name;
  j["n"] = st.n;
  j["p"] = st.p;
  j["ame"] = report.ame;
  j["false_nonzero"] = report.false_nonzero;
  j["false_zero"] = report.false_zero;
  j["amr"] = report.amr;
  j["replications"] = {{"total", report.m_total},
                       {"used", report.m_used},
                       {"failed", report.m_failed}};
  j["rng"] = report.rng_name;
  nlohmann::json coefs = nlohmann::json::array();
  for (const auto& c : report.coefficients) {
    coefs.push_back({{"coefficient", "z" + std::to_string(c.index + 1)},
                     {"truth", c.truth},
                     {"bias", c.bias},
                     {"esd", c.esd},
                     {"mse", c.mse},
                     {"cr", c.cr}});
  }
  j["coefficients"] = coefs;
  j["version"] = kLibraryVersion;
  return j;
}

std::string replications_csv(const std::vector<ReplicationRecord>& records, const SimSetting& st) {
  std::ostringstream out;
  out.precision(12);
  out << "rep,seed,ok,converged,mr,me,coefficient,truth,estimate,se\n";
  for (const auto& r : records) {
    if (!r.ok) {
      out << r.rep << ',' << r.seed << ",0,0,,,,,,\n";
      continue;
    }
    out << r.rep << ',' << r.seed << ",1," << (r.fit_converged ? 1 : 0) << ',' << r.mr << ','
        << r.me << ",(intercept)," << st.beta0_star_true << ',' << r.beta0_star << ",\n";
    for (int j = 0; j < st.p; ++j) {
      out << r.rep << ',' << r.seed << ",1," << (r.fit_converged ? 1 : 0) << ',' << r.mr << ','
          << r.me << ",z" << (j + 1) << ',' << st.beta_true(j) << ',' << r.beta(j) << ',';
      if (r.se(j) > 0.0) out << r.se(j);
      out << '\n';
    }
  }
  return out.str();
}

std::string tuning_trace_csv(const std::vector<TuneCandidate>& trace) {
  std::ostringstream out;
  out.precision(12);
  out << "lambda,h,omega,df,deviance,gcv,bic,support_size,excluded\n";
  for (const auto& t : trace) {
    out << t.lambda << ',';
    if (std::isfinite(t.h)) out << t.h;
    out << ',';
    if (std::isfinite(t.omega)) out << t.omega;
    out << ',' << t.df << ',' << t.deviance << ',' << t.gcv << ',' << t.bic << ','
        << t.support_size << ',' << (t.excluded ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace miscls
