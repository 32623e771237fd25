#include "weakmeas/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "weakmeas/analysis.hpp"
#include "weakmeas/error.hpp"

namespace weakmeas {
namespace {

constexpr int kMaxIterations = 200;
constexpr double kBracketWidth = 1e-10;
constexpr double kGradientTolerance = 1e-8;
constexpr double kZeroInformation = 1e-12;

double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

void require_grid(const SampleCounts& counts, const MeasurementModel& model,
                  const FinalBasis& basis) {
  if (counts.n_outcomes != model.size() || counts.n_basis != basis.size() ||
      counts.counts.size() != counts.n_outcomes * counts.n_basis) {
    throw Error(ErrorCode::InvalidArgument, "counts do not match the model/basis outcome grid");
  }
}

// Log-likelihood of the exact model with its first two derivatives in eps.
// With z(m,f) = <f|psi> + eps kappa_m <f|A|psi>, p(m,f) = w_m |z|^2 / N(eps) where
// N(eps) = sum_{m,f} w_m |z|^2.
class Likelihood {
 public:
  Likelihood(const SampleCounts& counts, const MeasurementModel& model, const Observable& a,
             const State& psi, const FinalBasis& basis)
      : counts_(counts), model_(model) {
    const Vector a_psi = a.matrix() * psi.amplitudes();
    for (const auto& f : basis.vectors()) {
      overlap_.push_back(f.amplitudes().dot(psi.amplitudes()));
      numerator_.push_back(f.amplitudes().dot(a_psi));
    }
  }

  struct Value {
    double value = 0.0;
    double first = 0.0;
    double second = 0.0;
  };

  Value evaluate(double eps) const {
    Value out;
    double norm = 0.0, norm_d1 = 0.0, norm_d2 = 0.0;
    for (std::size_t m = 0; m < model_.size(); ++m) {
      const double w = model_.weights()[m];
      const double k = model_.correlations()[m];
      for (std::size_t f = 0; f < overlap_.size(); ++f) {
        const Complex z = overlap_[f] + eps * k * numerator_[f];
        const double g = w * std::norm(z);
        const double g1 = 2.0 * w * k * (std::conj(z) * numerator_[f]).real();
        const double g2 = 2.0 * w * k * k * std::norm(numerator_[f]);
        norm += g;
        norm_d1 += g1;
        norm_d2 += g2;
        const auto c = static_cast<double>(counts_.at(m, f));
        if (c == 0.0) continue;
        if (g <= 0.0) {
          out.value = -std::numeric_limits<double>::infinity();
          continue;
        }
        out.value += c * std::log(g);
        out.first += c * g1 / g;
        out.second += c * (g2 / g - (g1 / g) * (g1 / g));
      }
    }
    const auto n = static_cast<double>(counts_.n_total);
    out.value -= n * std::log(norm);
    out.first -= n * norm_d1 / norm;
    out.second -= n * (norm_d2 / norm - (norm_d1 / norm) * (norm_d1 / norm));
    return out;
  }

 private:
  const SampleCounts& counts_;
  const MeasurementModel& model_;
  std::vector<Complex> overlap_;
  std::vector<Complex> numerator_;
};

}  // namespace

SampleCounts sample_outcomes(const MeasurementModel& model, const Observable& a,
                             const State& psi, const FinalBasis& basis, Epsilon eps_true,
                             std::uint64_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "samples must be >= 1");
  const JointDistribution dist = joint_prob_exact(model, a, psi, basis, eps_true);

  std::vector<double> cdf(dist.entries.size());
  std::partial_sum(dist.entries.begin(), dist.entries.end(), cdf.begin());
  const double total = cdf.back();

  SampleCounts out;
  out.n_outcomes = dist.n_outcomes;
  out.n_basis = dist.n_basis;
  out.counts.assign(dist.entries.size(), 0);
  out.n_total = n;
  out.seed = seed;
  out.epsilon_true = eps_true.value;

  std::mt19937_64 gen(seed);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double u = uniform01(gen) * total;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto cell = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
    ++out.counts[cell];
  }
  return out;
}

double epsilon_search_bound(const MeasurementModel& model, const Observable& a,
                            const Tolerances& tol) {
  const double scale = model.max_abs_correlation() * a.spectral_norm();
  if (!(scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "coupling scale is zero");
  return tol.weak_regime / scale;
}

EstimationResult mle_epsilon(const SampleCounts& counts, const MeasurementModel& model,
                             const Observable& a, const State& psi, const FinalBasis& basis,
                             const Tolerances& tol) {
  require_grid(counts, model, basis);
  const Likelihood likelihood(counts, model, a, psi, basis);
  const double bound = epsilon_search_bound(model, a, tol);

  // Golden-section search for the maximum on [-bound, bound].
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = -bound, hi = bound;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = likelihood.evaluate(x1).value;
  double f2 = likelihood.evaluate(x2).value;
  int iterations = 0;
  while (hi - lo > kBracketWidth && iterations < kMaxIterations) {
    ++iterations;
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = likelihood.evaluate(x1).value;
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = likelihood.evaluate(x2).value;
    }
  }
  double best = f1 >= f2 ? x1 : x2;
  Likelihood::Value at_best = likelihood.evaluate(best);

  // One Newton refinement; kept only if it stays in range and reduces the gradient.
  if (at_best.second < 0.0 && std::isfinite(at_best.first)) {
    const double candidate = best - at_best.first / at_best.second;
    if (candidate >= -bound && candidate <= bound) {
      const Likelihood::Value at_candidate = likelihood.evaluate(candidate);
      if (std::abs(at_candidate.first) <= std::abs(at_best.first) &&
          at_candidate.value >= at_best.value - 1e-9 * std::abs(at_best.value)) {
        best = candidate;
        at_best = at_candidate;
      }
    }
  }

  EstimationResult result;
  result.epsilon_hat = best;
  result.log_likelihood = at_best.value;
  result.iterations = iterations;
  result.converged = std::isfinite(at_best.first) &&
                     std::abs(at_best.first) <= kGradientTolerance * static_cast<double>(counts.n_total);
  const double fisher = fisher_information(model, a, psi, basis, tol).total;
  result.stderr_predicted = fisher > 0.0
                                ? 1.0 / std::sqrt(fisher * static_cast<double>(counts.n_total))
                                : std::numeric_limits<double>::infinity();
  return result;
}

double score_estimate(const SampleCounts& counts, const MeasurementModel& model,
                      const Observable& a, const State& psi, const FinalBasis& basis,
                      const Tolerances& tol) {
  require_grid(counts, model, basis);
  const double fisher = fisher_information(model, a, psi, basis, tol).total;
  if (fisher <= kZeroInformation) {
    throw Error(ErrorCode::ZeroInformation, "Fisher information of this basis is zero");
  }
  double sum = 0.0;
  for (std::size_t f = 0; f < basis.size(); ++f) {
    // Post-selections orthogonal to psi carry no score at eps = 0.
    if (std::norm(inner(basis[f], psi)) < tol.overlap_floor) continue;
    for (std::size_t m = 0; m < model.size(); ++m) {
      const auto c = counts.at(m, f);
      if (c == 0) continue;
      sum += static_cast<double>(c) * log_derivative(model, a, psi, basis[f], m, tol);
    }
  }
  return sum / (static_cast<double>(counts.n_total) * fisher);
}

}  // namespace weakmeas
