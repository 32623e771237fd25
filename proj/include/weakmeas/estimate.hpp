#pragma once

#include <cstdint>
#include <vector>

#include "weakmeas/hilbert.hpp"
#include "weakmeas/measurement.hpp"
#include "weakmeas/tolerances.hpp"

namespace weakmeas {

/// Outcome counts over the (model order x basis order) grid.
struct SampleCounts {
  std::size_t n_outcomes = 0;
  std::size_t n_basis = 0;
  std::vector<std::uint64_t> counts;
  std::uint64_t n_total = 0;
  std::uint64_t seed = 0;
  double epsilon_true = 0.0;

  std::uint64_t at(std::size_t m, std::size_t f) const { return counts[m * n_basis + f]; }
  bool operator==(const SampleCounts&) const = default;
};

struct EstimationResult {
  double epsilon_hat = 0.0;
  double stderr_predicted = 0.0;  // delta_eps / sqrt(n)
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;

  bool operator==(const EstimationResult&) const = default;
};

/// Draws n outcomes from joint_prob_exact at eps_true by inverse CDF over the fixed grid order.
/// Deterministic for a given seed. Throws InvalidArgument when n == 0.
SampleCounts sample_outcomes(const MeasurementModel& model, const Observable& a,
                             const State& psi, const FinalBasis& basis, Epsilon eps_true,
                             std::uint64_t n, std::uint64_t seed);

/// Search half-width 0.2 / (max|kappa| ||A||_2) for the likelihood maximization.
double epsilon_search_bound(const MeasurementModel& model, const Observable& a,
                            const Tolerances& tol = kDefaultTolerances);

/// Maximum-likelihood eps under the exact model: golden-section search over the weak-regime
/// interval followed by one Newton step. converged means |dL/d eps| <= 1e-8 n at the result.
EstimationResult mle_epsilon(const SampleCounts& counts, const MeasurementModel& model,
                             const Observable& a, const State& psi, const FinalBasis& basis,
                             const Tolerances& tol = kDefaultTolerances);

/// One-step score estimator (1 / (n F)) sum counts(m,f) * score(m,f).
/// Throws ZeroInformation when F <= 1e-12.
double score_estimate(const SampleCounts& counts, const MeasurementModel& model,
                      const Observable& a, const State& psi, const FinalBasis& basis,
                      const Tolerances& tol = kDefaultTolerances);

}  // namespace weakmeas
