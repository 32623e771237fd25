#include "weakmeas/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "weakmeas/analysis.hpp"
#include "weakmeas/error.hpp"
#include "weakmeas/estimate.hpp"

namespace weakmeas {
namespace {

using Json = nlohmann::ordered_json;

Json pair(Complex z) { return Json::array({z.real(), z.imag()}); }

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json command_echo(const char* name, const CommandOptions& options) {
  return Json{{"name", name}, {"tolerance", options.tol.structural}};
}

Json basis_json(const FinalBasis& basis) {
  Json out = Json::array();
  for (std::size_t k = 0; k < basis.size(); ++k) {
    Json vec = Json::array();
    for (std::size_t i = 0; i < basis.dim(); ++i) vec.push_back(pair(basis[k][i]));
    out.push_back(Json{{"label", basis.labels()[k]}, {"amplitudes", std::move(vec)}});
  }
  return out;
}

Json table_json(const WeakValueTable& table) {
  Json out = Json::array();
  for (const auto& e : table.entries) {
    out.push_back(Json{{"label", e.label},
                       {"post_prob", e.post_prob},
                       {"weak_value", e.defined ? pair(e.weak_value) : Json(nullptr)},
                       {"defined", e.defined}});
  }
  return out;
}

void warn_undefined(const WeakValueTable& table, Json& warnings) {
  for (const auto& e : table.entries) {
    if (!e.defined) {
      warnings.push_back("weak value undefined for " + e.label +
                         ": post-selection orthogonal to the initial state");
    }
  }
}

Json fisher_json(const FisherReport& report, const Observable& a, const State& psi,
                 const FinalBasis& basis, const Tolerances& tol) {
  Json contributions = Json::array();
  for (std::size_t f = 0; f < report.contributions.size(); ++f) {
    contributions.push_back(Json{{"label", report.labels[f]}, {"value", report.contributions[f]}});
  }
  const double bound = max_sensitivity(a, psi);
  return Json{{"contributions", std::move(contributions)},
              {"total", report.total},
              {"delta_eps", finite_or_null(report.delta_eps)},
              {"max_sensitivity", bound},
              {"saturation_ratio", bound > 0.0 ? Json(report.total / bound) : Json(nullptr)},
              {"fisher_phase", fisher_phase(a, psi, basis, tol)},
              {"basis_is_real", report.basis_is_real},
              {"max_abs_weak_value", report.max_abs_weak_value}};
}

Json base_report(const char* name, const ProblemSpec& problem, const CommandOptions& options) {
  return Json{{"command", command_echo(name, options)}, {"input_digest", problem.digest}};
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

Json cmd_weak_values(const ProblemSpec& problem, const CommandOptions& options) {
  const FinalBasis basis = resolve_basis(problem, options.tol);
  const WeakValueTable table = weak_value_table(problem.observable, problem.state, basis, options.tol);
  Json warnings = Json::array();
  warn_undefined(table, warnings);

  Json report = base_report("weak-values", problem, options);
  report["basis"] = basis_json(basis);
  report["weak_values"] = table_json(table);
  report["is_real_basis"] =
      is_real_basis(problem.observable, problem.state, basis, options.tol.structural, options.tol);
  report["warnings"] = std::move(warnings);
  return report;
}

Json cmd_fisher(const ProblemSpec& problem, const CommandOptions& options) {
  const FinalBasis basis = resolve_basis(problem, options.tol);
  const WeakValueTable table = weak_value_table(problem.observable, problem.state, basis, options.tol);
  const FisherReport fisher =
      fisher_information(problem.model, problem.observable, problem.state, basis, options.tol);
  Json warnings = Json::array();
  warn_undefined(table, warnings);

  Json report = base_report("fisher", problem, options);
  report["basis"] = basis_json(basis);
  report["weak_values"] = table_json(table);
  report["fisher"] = fisher_json(fisher, problem.observable, problem.state, basis, options.tol);
  report["warnings"] = std::move(warnings);
  return report;
}

Json cmd_simulate(const ProblemSpec& problem, const CommandOptions& options) {
  std::vector<std::string> missing;
  if (!problem.epsilon) missing.push_back("epsilon: required by simulate");
  if (!problem.samples) missing.push_back("samples: required by simulate");
  if (!problem.seed) missing.push_back("seed: required by simulate");
  if (!missing.empty()) throw InputError(std::move(missing));

  const auto& a = problem.observable;
  const auto& psi = problem.state;
  const auto& model = problem.model;
  const FinalBasis basis = resolve_basis(problem, options.tol);
  const WeakValueTable table = weak_value_table(a, psi, basis, options.tol);
  const FisherReport fisher = fisher_information(model, a, psi, basis, options.tol);
  const Epsilon eps{*problem.epsilon};

  Json warnings = Json::array();
  warn_undefined(table, warnings);
  const double regime = weak_regime_parameter(model, a, eps);
  if (regime > options.tol.weak_regime) {
    warnings.push_back("epsilon outside the weak regime; the estimate is confined to the search interval");
  }

  const SampleCounts counts = sample_outcomes(model, a, psi, basis, eps,
                                              static_cast<std::uint64_t>(*problem.samples),
                                              *problem.seed);
  const EstimationResult mle = mle_epsilon(counts, model, a, psi, basis, options.tol);
  Json score = nullptr;
  try {
    score = score_estimate(counts, model, a, psi, basis, options.tol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ZeroInformation) throw;
    warnings.push_back("score estimate unavailable: Fisher information is zero for this basis");
  }

  Json count_rows = Json::array();
  for (std::size_t m = 0; m < counts.n_outcomes; ++m) {
    for (std::size_t f = 0; f < counts.n_basis; ++f) {
      count_rows.push_back(Json{{"outcome", model.labels()[m]},
                                {"basis", basis.labels()[f]},
                                {"count", counts.at(m, f)}});
    }
  }

  Json report = base_report("simulate", problem, options);
  report["basis"] = basis_json(basis);
  report["weak_values"] = table_json(table);
  report["fisher"] = fisher_json(fisher, a, psi, basis, options.tol);
  report["estimation"] = Json{{"epsilon_true", eps.value},
                              {"samples", counts.n_total},
                              {"seed", counts.seed},
                              {"weak_regime_parameter", regime},
                              {"search_bound", epsilon_search_bound(model, a, options.tol)},
                              {"counts", std::move(count_rows)},
                              {"epsilon_hat", mle.epsilon_hat},
                              {"log_likelihood", mle.log_likelihood},
                              {"iterations", mle.iterations},
                              {"converged", mle.converged},
                              {"score_estimate", std::move(score)},
                              {"stderr_predicted", finite_or_null(mle.stderr_predicted)}};
  if (!mle.converged) {
    warnings.push_back("likelihood maximization did not converge");
    report["warnings"] = std::move(warnings);
    throw NumericFailure("likelihood maximization did not converge", std::move(report));
  }
  report["warnings"] = std::move(warnings);
  return report;
}

Json cmd_scan(const ProblemSpec& problem, const ScanOptions& scan, const CommandOptions& options) {
  std::vector<std::string> errors;
  if (problem.dim != 2) errors.push_back("dim: scan sweeps qubit bases and requires dim 2");
  if (scan.points < 1) errors.push_back("--points: must be >= 1");
  if (!std::isfinite(scan.theta_start) || !std::isfinite(scan.theta_end)) {
    errors.push_back("--theta-start/--theta-end: must be finite");
  }
  if (!errors.empty()) throw InputError(std::move(errors));

  const auto& a = problem.observable;
  const auto& psi = problem.state;
  Json rows = Json::array();
  Json warnings = Json::array();
  double fisher_min = std::numeric_limits<double>::infinity();
  double fisher_max = -std::numeric_limits<double>::infinity();
  double weak_max = 0.0;
  const double step = (scan.theta_end - scan.theta_start) / scan.points;
  for (int k = 0; k < scan.points; ++k) {
    const double theta = scan.theta_start + k * step;
    const FinalBasis basis = rotated_qubit_basis(theta);
    const WeakValueTable table = weak_value_table(a, psi, basis, options.tol);
    const FisherReport fisher = fisher_information(problem.model, a, psi, basis, options.tol);

    Json weak = Json::array();
    Json undefined = Json::array();
    for (const auto& e : table.entries) {
      weak.push_back(e.defined ? pair(e.weak_value) : Json(nullptr));
      if (!e.defined) undefined.push_back(e.label);
    }
    if (!undefined.empty()) {
      warnings.push_back("theta " + format_double(theta) + ": undefined weak value");
    }
    fisher_min = std::min(fisher_min, fisher.total);
    fisher_max = std::max(fisher_max, fisher.total);
    weak_max = std::max(weak_max, fisher.max_abs_weak_value);
    rows.push_back(Json{{"theta", theta},
                        {"p_f1", table.entries[0].post_prob},
                        {"weak_values", std::move(weak)},
                        {"max_abs_weak_value", fisher.max_abs_weak_value},
                        {"fisher_total", fisher.total},
                        {"fisher_phase", fisher_phase(a, psi, basis, options.tol)},
                        {"undefined", std::move(undefined)}});
  }

  Json report = base_report("scan", problem, options);
  report["command"]["theta_start"] = scan.theta_start;
  report["command"]["theta_end"] = scan.theta_end;
  report["command"]["points"] = scan.points;
  report["max_sensitivity"] = max_sensitivity(a, psi);
  report["rows"] = std::move(rows);
  report["summary"] = Json{{"fisher_min", fisher_min},
                           {"fisher_max", fisher_max},
                           {"max_abs_weak_value", weak_max}};
  report["warnings"] = std::move(warnings);
  return report;
}

std::string render_document(const Json& report) { return report.dump(2) + "\n"; }

std::string render_scan_csv(const Json& report) {
  if (!report.contains("rows")) {
    throw InputError({"--format: csv output is only available for scan reports"});
  }
  std::string out =
      "theta,p_f1,weak_value_f1_re,weak_value_f1_im,weak_value_f2_re,weak_value_f2_im,"
      "max_abs_weak_value,fisher_total,fisher_phase,undefined\n";
  for (const auto& row : report["rows"]) {
    out += format_double(row["theta"].get<double>()) + ",";
    out += format_double(row["p_f1"].get<double>()) + ",";
    for (const auto& w : row["weak_values"]) {
      if (w.is_null()) {
        out += ",,";
      } else {
        out += format_double(w[0].get<double>()) + "," + format_double(w[1].get<double>()) + ",";
      }
    }
    out += format_double(row["max_abs_weak_value"].get<double>()) + ",";
    out += format_double(row["fisher_total"].get<double>()) + ",";
    out += format_double(row["fisher_phase"].get<double>()) + ",";
    std::string undefined;
    for (const auto& label : row["undefined"]) {
      if (!undefined.empty()) undefined += ";";
      undefined += label.get<std::string>();
    }
    out += undefined + "\n";
  }
  return out;
}

}  // namespace weakmeas
