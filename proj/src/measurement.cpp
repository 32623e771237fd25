#include "weakmeas/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "weakmeas/error.hpp"

namespace weakmeas {
namespace {

std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back("m" + std::to_string(i));
  return labels;
}

void require_same_dim(const Observable& a, const State& psi, const FinalBasis& basis) {
  if (a.dim() != psi.dim() || basis.dim() != psi.dim()) {
    throw Error(ErrorCode::DimMismatch, "observable, state and basis dimensions differ");
  }
}

}  // namespace

MeasurementModel::MeasurementModel(std::vector<std::string> labels, std::vector<double> weights,
                                   std::vector<double> correlations)
    : labels_(std::move(labels)), weights_(std::move(weights)), correlations_(std::move(correlations)) {
  if (weights_.size() != correlations_.size() || labels_.size() != weights_.size()) {
    throw Error(ErrorCode::InvalidModel, "labels, weights and correlations differ in length");
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    for (std::size_t j = i + 1; j < labels_.size(); ++j) {
      if (labels_[i] == labels_[j]) throw Error(ErrorCode::InvalidModel, "duplicate outcome label " + labels_[i]);
    }
  }
}

MeasurementModel::MeasurementModel(const std::vector<double>& weights,
                                   const std::vector<double>& correlations)
    : MeasurementModel(default_labels(weights.size()), weights, correlations) {}

MeasurementModel MeasurementModel::binary() {
  return MeasurementModel({"+", "-"}, {0.5, 0.5}, {1.0, -1.0});
}

std::size_t MeasurementModel::index_of(std::string_view label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    throw Error(ErrorCode::UnknownOutcome, "no outcome labelled '" + std::string(label) + "'");
  }
  return static_cast<std::size_t>(it - labels_.begin());
}

double MeasurementModel::max_abs_correlation() const {
  double m = 0.0;
  for (double k : correlations_) m = std::max(m, std::abs(k));
  return m;
}

bool ModelValidation::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const ModelCheck& c) { return c.passed; });
}

const ModelCheck* ModelValidation::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string ModelValidation::describe_failures() const {
  std::ostringstream os;
  os.precision(3);
  bool first = true;
  for (const auto& c : checks) {
    if (c.passed) continue;
    if (!first) os << "; ";
    os << c.name << " (residual " << std::scientific << c.residual << ")";
    first = false;
  }
  return os.str();
}

ModelValidation validate_model(const MeasurementModel& model, const Tolerances& tol) {
  ModelValidation report;
  const auto& w = model.weights();
  const auto& k = model.correlations();

  report.checks.push_back({"outcome_count", model.size() >= 2 ? 0.0 : 1.0, model.size() >= 2});

  double min_weight = w.empty() ? 0.0 : *std::min_element(w.begin(), w.end());
  report.checks.push_back(
      {"positive_weights", min_weight > 0.0 ? 0.0 : -min_weight, min_weight > 0.0});

  double sum_w = 0.0, first = 0.0, second = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    sum_w += w[i];
    first += w[i] * k[i];
    second += w[i] * k[i] * k[i];
  }
  auto add = [&](const char* name, double residual) {
    report.checks.push_back({name, residual, std::isfinite(residual) && residual <= tol.model});
  };
  add("weights_sum_to_one", std::abs(sum_w - 1.0));
  add("unbiased_correlation", std::abs(first));
  add("correlation_normalization", std::abs(second - 1.0));
  return report;
}

Matrix kraus_operator(const MeasurementModel& model, std::size_t outcome, const Observable& a,
                      Epsilon eps) {
  if (outcome >= model.size()) {
    throw Error(ErrorCode::UnknownOutcome, "outcome index " + std::to_string(outcome));
  }
  const auto n = static_cast<Eigen::Index>(a.dim());
  const double scale = std::sqrt(model.weights()[outcome]);
  return scale * (Matrix::Identity(n, n) + eps.value * model.correlations()[outcome] * a.matrix());
}

Matrix kraus_operator(const MeasurementModel& model, std::string_view outcome, const Observable& a,
                      Epsilon eps) {
  return kraus_operator(model, model.index_of(outcome), a, eps);
}

double weak_regime_parameter(const MeasurementModel& model, const Observable& a, Epsilon eps) {
  return std::abs(eps.value) * model.max_abs_correlation() * a.spectral_norm();
}

double JointDistribution::total() const {
  double s = 0.0;
  for (double p : entries) s += p;
  return s;
}

std::vector<double> JointDistribution::marginal_basis() const {
  std::vector<double> out(n_basis, 0.0);
  for (std::size_t m = 0; m < n_outcomes; ++m) {
    for (std::size_t f = 0; f < n_basis; ++f) out[f] += at(m, f);
  }
  return out;
}

bool JointDistribution::has_negative() const {
  return std::any_of(entries.begin(), entries.end(), [](double p) { return p < 0.0; });
}

JointDistribution joint_prob_linear(const MeasurementModel& model, const Observable& a,
                                    const State& psi, const FinalBasis& basis, Epsilon eps,
                                    const Tolerances& tol) {
  require_same_dim(a, psi, basis);
  JointDistribution dist;
  dist.n_outcomes = model.size();
  dist.n_basis = basis.size();
  dist.epsilon = eps.value;
  dist.mode = ProbabilityMode::FirstOrder;
  dist.entries.assign(dist.n_outcomes * dist.n_basis, 0.0);

  const Vector a_psi = a.matrix() * psi.amplitudes();
  for (std::size_t f = 0; f < basis.size(); ++f) {
    const Complex overlap = basis[f].amplitudes().dot(psi.amplitudes());
    const double post = std::norm(overlap);
    double re_weak = 0.0;
    if (post >= tol.overlap_floor) {
      re_weak = (basis[f].amplitudes().dot(a_psi) / overlap).real();
    }
    for (std::size_t m = 0; m < model.size(); ++m) {
      const double w = model.weights()[m];
      const double k = model.correlations()[m];
      dist.entries[m * dist.n_basis + f] = w * post * (1.0 + 2.0 * eps.value * k * re_weak);
    }
  }

  if (weak_regime_parameter(model, a, eps) > tol.weak_regime) {
    dist.warnings.push_back("coupling outside the weak regime: |eps| max|kappa| ||A|| > " +
                            std::to_string(tol.weak_regime));
  }
  if (dist.has_negative()) {
    dist.warnings.push_back("first-order probabilities contain negative entries");
  }
  return dist;
}

JointDistribution joint_prob_exact(const MeasurementModel& model, const Observable& a,
                                   const State& psi, const FinalBasis& basis, Epsilon eps,
                                   const Tolerances& tol) {
  require_same_dim(a, psi, basis);
  JointDistribution dist;
  dist.n_outcomes = model.size();
  dist.n_basis = basis.size();
  dist.epsilon = eps.value;
  dist.mode = ProbabilityMode::Exact;
  dist.entries.assign(dist.n_outcomes * dist.n_basis, 0.0);

  double norm = 0.0;
  for (std::size_t m = 0; m < model.size(); ++m) {
    const Vector out = kraus_operator(model, m, a, eps) * psi.amplitudes();
    for (std::size_t f = 0; f < basis.size(); ++f) {
      const double p = std::norm(basis[f].amplitudes().dot(out));
      dist.entries[m * dist.n_basis + f] = p;
      norm += p;
    }
  }

  const double a2 = expectation_squared(a, psi);
  const double predicted = 1.0 + eps.value * eps.value * a2;
  if (validate_model(model, tol).ok()) {
    const double scale = 1.0 + std::abs(eps.value) * a.spectral_norm();
    if (std::abs(norm - predicted) > 4.0 * tol.model * scale * scale) {
      throw std::logic_error("exact normalization deviates from 1 + eps^2 <A^2>");
    }
  } else {
    dist.warnings.push_back("measurement model violates its invariants; normalized numerically");
  }
  for (double& p : dist.entries) p /= norm;
  return dist;
}

double log_derivative(const MeasurementModel& model, const Observable& a, const State& psi,
                      const State& f, std::size_t outcome, const Tolerances& tol) {
  if (outcome >= model.size()) {
    throw Error(ErrorCode::UnknownOutcome, "outcome index " + std::to_string(outcome));
  }
  if (a.dim() != psi.dim() || f.dim() != psi.dim()) {
    throw Error(ErrorCode::DimMismatch, "observable, state and post-selection dimensions differ");
  }
  const Complex overlap = inner(f, psi);
  if (std::norm(overlap) < tol.overlap_floor) {
    throw Error(ErrorCode::UndefinedWeakValue, "post-selection is orthogonal to the initial state");
  }
  const Complex weak = f.amplitudes().dot(a.matrix() * psi.amplitudes()) / overlap;
  return 2.0 * model.correlations()[outcome] * weak.real();
}

double log_derivative(const MeasurementModel& model, const Observable& a, const State& psi,
                      const State& f, std::string_view outcome, const Tolerances& tol) {
  return log_derivative(model, a, psi, f, model.index_of(outcome), tol);
}

}  // namespace weakmeas
