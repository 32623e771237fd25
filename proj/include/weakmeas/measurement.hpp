#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "weakmeas/hilbert.hpp"
#include "weakmeas/tolerances.hpp"

namespace weakmeas {

/// Unknown interaction strength of the weak measurement.
struct Epsilon {
  double value = 0.0;
};

/// Weak-pointer outcome set {m} with prior probabilities w_m and correlation factors kappa_m.
///
/// Measurement operators are E_m = sqrt(w_m) (1 + eps kappa_m A). A model is valid when
/// w_m > 0, sum w_m = 1, sum w_m kappa_m = 0 and sum w_m kappa_m^2 = 1. Construction only
/// checks shapes; use validate_model() for the invariants.
class MeasurementModel {
 public:
  MeasurementModel(std::vector<std::string> labels, std::vector<double> weights,
                   std::vector<double> correlations);
  /// Labels default to "m0", "m1", ...
  MeasurementModel(const std::vector<double>& weights, const std::vector<double>& correlations);

  /// Two outcomes "+"/"-", w = 1/2, kappa = +1/-1.
  static MeasurementModel binary();

  std::size_t size() const noexcept { return weights_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<double>& correlations() const noexcept { return correlations_; }

  /// Throws UnknownOutcome.
  std::size_t index_of(std::string_view label) const;
  double max_abs_correlation() const;

 private:
  std::vector<std::string> labels_;
  std::vector<double> weights_;
  std::vector<double> correlations_;
};

struct ModelCheck {
  std::string name;
  double residual = 0.0;
  bool passed = false;
};

struct ModelValidation {
  std::vector<ModelCheck> checks;

  bool ok() const;
  /// Human-readable list of failed checks with residuals; empty when ok().
  std::string describe_failures() const;
  const ModelCheck* find(std::string_view name) const;
};

/// Reports each model invariant with its residual. Never throws.
ModelValidation validate_model(const MeasurementModel& model,
                               const Tolerances& tol = kDefaultTolerances);

/// sqrt(w_m) (1 + eps kappa_m A). Throws UnknownOutcome.
Matrix kraus_operator(const MeasurementModel& model, std::string_view outcome, const Observable& a,
                      Epsilon eps);
Matrix kraus_operator(const MeasurementModel& model, std::size_t outcome, const Observable& a,
                      Epsilon eps);

/// |eps| * max|kappa| * ||A||_2.
double weak_regime_parameter(const MeasurementModel& model, const Observable& a, Epsilon eps);

enum class ProbabilityMode { FirstOrder, Exact };

/// Joint outcome probabilities p(m, f), stored row-major over (model order x basis order).
struct JointDistribution {
  std::size_t n_outcomes = 0;
  std::size_t n_basis = 0;
  std::vector<double> entries;
  double epsilon = 0.0;
  ProbabilityMode mode = ProbabilityMode::Exact;
  std::vector<std::string> warnings;

  double at(std::size_t m, std::size_t f) const { return entries[m * n_basis + f]; }
  double total() const;
  /// sum_m p(m, f).
  std::vector<double> marginal_basis() const;
  bool has_negative() const;
};

/// First-order joint distribution
/// p(m,f) = w_m |<f|psi>|^2 (1 + 2 eps kappa_m Re[A_w(f)]).
/// The weak-value correction is dropped where |<f|psi>|^2 < tol.overlap_floor. Negative
/// entries are kept and flagged with a warning, as is a coupling outside the weak regime.
JointDistribution joint_prob_linear(const MeasurementModel& model, const Observable& a,
                                    const State& psi, const FinalBasis& basis, Epsilon eps,
                                    const Tolerances& tol = kDefaultTolerances);

/// Born-rule distribution |<f|E_m|psi>|^2 / N(eps). For valid models N(eps) = 1 + eps^2 <A^2>,
/// which is checked.
JointDistribution joint_prob_exact(const MeasurementModel& model, const Observable& a,
                                   const State& psi, const FinalBasis& basis, Epsilon eps,
                                   const Tolerances& tol = kDefaultTolerances);

/// d/d(eps) ln p(m,f) at eps = 0, i.e. 2 kappa_m Re[<f|A|psi>/<f|psi>].
/// Throws UndefinedWeakValue when |<f|psi>|^2 < tol.overlap_floor.
double log_derivative(const MeasurementModel& model, const Observable& a, const State& psi,
                      const State& f, std::string_view outcome,
                      const Tolerances& tol = kDefaultTolerances);
double log_derivative(const MeasurementModel& model, const Observable& a, const State& psi,
                      const State& f, std::size_t outcome,
                      const Tolerances& tol = kDefaultTolerances);

}  // namespace weakmeas
