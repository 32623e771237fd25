#include "weakmeas/analysis.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "weakmeas/error.hpp"

namespace weakmeas {
namespace {

constexpr double kShuntNormFloor = 1e-12;
constexpr double kShuntMeanFloor = 1e-10;
constexpr double kRealCoefficientTol = 1e-12;

void require_same_dim(const Observable& a, const State& psi, const FinalBasis& basis) {
  if (a.dim() != psi.dim() || basis.dim() != psi.dim()) {
    throw Error(ErrorCode::DimMismatch, "observable, state and basis dimensions differ");
  }
}

// <psi|f><f|A|psi> for each basis vector together with |<f|psi>|^2.
struct OverlapTerms {
  std::vector<Complex> overlap;    // <f|psi>
  std::vector<Complex> numerator;  // <f|A|psi>
};

OverlapTerms overlap_terms(const Observable& a, const State& psi, const FinalBasis& basis) {
  require_same_dim(a, psi, basis);
  const Vector a_psi = a.matrix() * psi.amplitudes();
  OverlapTerms t;
  t.overlap.reserve(basis.size());
  t.numerator.reserve(basis.size());
  for (const auto& f : basis.vectors()) {
    t.overlap.push_back(f.amplitudes().dot(psi.amplitudes()));
    t.numerator.push_back(f.amplitudes().dot(a_psi));
  }
  return t;
}

// Fisher contribution of a post-selection orthogonal to psi. There p(m,f) = w_m kappa_m^2
// eps^2 |<f|A|psi>|^2 / N(eps), so sum_m p'^2 / p tends to 4 |<f|A|psi>|^2 as eps -> 0 for
// either a real or an imaginary coupling.
double orthogonal_outcome_limit(Complex numerator) { return 4.0 * std::norm(numerator); }

// Uniform double in [-1, 1) from the top 53 bits; independent of the standard library's
// distribution implementation so bases are identical across toolchains.
double uniform_pm1(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-52 - 1.0;
}

}  // namespace

Complex weak_value(const Observable& a, const State& psi, const State& f, const Tolerances& tol) {
  if (a.dim() != psi.dim() || f.dim() != psi.dim()) {
    throw Error(ErrorCode::DimMismatch, "observable, state and post-selection dimensions differ");
  }
  const Complex overlap = inner(f, psi);
  if (std::norm(overlap) < tol.overlap_floor) {
    throw Error(ErrorCode::UndefinedWeakValue, "post-selection is orthogonal to the initial state");
  }
  return f.amplitudes().dot(a.matrix() * psi.amplitudes()) / overlap;
}

double WeakValueTable::max_abs_weak_value() const {
  double m = 0.0;
  for (const auto& e : entries) {
    if (e.defined) m = std::max(m, std::abs(e.weak_value));
  }
  return m;
}

WeakValueTable weak_value_table(const Observable& a, const State& psi, const FinalBasis& basis,
                                const Tolerances& tol) {
  const OverlapTerms t = overlap_terms(a, psi, basis);
  WeakValueTable table;
  table.entries.reserve(basis.size());
  for (std::size_t f = 0; f < basis.size(); ++f) {
    WeakValueEntry e;
    e.label = basis.labels()[f];
    e.post_prob = std::norm(t.overlap[f]);
    e.numerator = t.numerator[f];
    e.defined = e.post_prob >= tol.overlap_floor;
    if (e.defined) e.weak_value = t.numerator[f] / t.overlap[f];
    table.entries.push_back(std::move(e));
  }
  return table;
}

FisherReport fisher_information(const MeasurementModel& model, const Observable& a,
                                const State& psi, const FinalBasis& basis, const Tolerances& tol) {
  const ModelValidation validation = validate_model(model, tol);
  if (!validation.ok()) {
    throw Error(ErrorCode::InvalidModel, validation.describe_failures());
  }
  const OverlapTerms t = overlap_terms(a, psi, basis);

  FisherReport report;
  report.labels = basis.labels();
  report.contributions.reserve(basis.size());
  for (std::size_t f = 0; f < basis.size(); ++f) {
    const double post = std::norm(t.overlap[f]);
    double c = 0.0;
    if (post >= tol.overlap_floor) {
      const double re = (std::conj(t.overlap[f]) * t.numerator[f]).real();
      c = 4.0 * re * re / post;
    } else {
      c = orthogonal_outcome_limit(t.numerator[f]);
    }
    report.contributions.push_back(c);
    report.total += c;
  }
  report.delta_eps = report.total > 0.0 ? 1.0 / std::sqrt(report.total)
                                        : std::numeric_limits<double>::infinity();
  report.basis_is_real = is_real_basis(a, psi, basis, tol.structural, tol);
  report.max_abs_weak_value = weak_value_table(a, psi, basis, tol).max_abs_weak_value();
  return report;
}

double fisher_phase(const Observable& a, const State& psi, const FinalBasis& basis,
                    const Tolerances& tol) {
  const OverlapTerms t = overlap_terms(a, psi, basis);
  double total = 0.0;
  for (std::size_t f = 0; f < basis.size(); ++f) {
    const double post = std::norm(t.overlap[f]);
    if (post < tol.overlap_floor) {
      total += orthogonal_outcome_limit(t.numerator[f]);
      continue;
    }
    const double im = (std::conj(t.overlap[f]) * t.numerator[f]).imag();
    total += 4.0 * im * im / post;
  }
  return total;
}

bool is_real_basis(const Observable& a, const State& psi, const FinalBasis& basis,
                   double threshold, const Tolerances& tol) {
  if (!(threshold > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  const OverlapTerms t = overlap_terms(a, psi, basis);
  for (std::size_t f = 0; f < basis.size(); ++f) {
    const double post = std::norm(t.overlap[f]);
    if (post < tol.overlap_floor) continue;
    // |Im A_w| sqrt(p) = |Im(<psi|f><f|A|psi>)| / |<f|psi>|
    const double scaled = std::abs((std::conj(t.overlap[f]) * t.numerator[f]).imag()) /
                          std::sqrt(post);
    if (scaled > threshold) return false;
  }
  return true;
}

double max_sensitivity(const Observable& a, const State& psi) {
  return 4.0 * expectation_squared(a, psi);
}

FinalBasis eigenbasis_strategy(const Observable& a) { return eig_hermitian(a).eigenbasis; }

FinalBasis shunted_basis(const Observable& a, const State& psi, const Tolerances& tol) {
  if (a.dim() != psi.dim()) throw Error(ErrorCode::DimMismatch, "observable/state dimension");
  const Vector a_psi = a.matrix() * psi.amplitudes();
  if (a_psi.norm() < kShuntNormFloor) {
    throw Error(ErrorCode::ShuntUndefined, "A|psi> vanishes");
  }
  if (std::abs(expectation(a, psi)) < kShuntMeanFloor) {
    throw Error(ErrorCode::ShuntUndefined,
                "<psi|A|psi> vanishes, so the carrying outcome would have zero probability");
  }
  const State carrier = normalize(a_psi);
  return complete_basis(std::span<const State>(&carrier, 1), a.dim(), tol);
}

FinalBasis real_random_basis(const Observable& a, const State& psi, std::uint64_t seed,
                             const Tolerances& tol) {
  if (a.dim() != psi.dim()) throw Error(ErrorCode::DimMismatch, "observable/state dimension");
  if (a.matrix().imag().cwiseAbs().maxCoeff() > kRealCoefficientTol) {
    throw Error(ErrorCode::NotRealRepresentable, "observable has complex entries");
  }
  if (psi.amplitudes().imag().cwiseAbs().maxCoeff() > kRealCoefficientTol) {
    throw Error(ErrorCode::NotRealRepresentable, "state has complex amplitudes");
  }

  const std::size_t dim = a.dim();
  std::mt19937_64 gen(seed);
  std::vector<Eigen::VectorXd> columns;
  columns.reserve(dim);
  while (columns.size() < dim) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = uniform_pm1(gen);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& c : columns) v -= c.dot(v) * c;
    }
    const double norm = v.norm();
    if (norm < 1e-6) continue;  // nearly dependent draw; redraw
    columns.push_back(v / norm);
  }

  std::vector<State> states;
  states.reserve(dim);
  for (const auto& c : columns) states.push_back(normalize(c.cast<Complex>()));
  return FinalBasis::from_states(std::move(states), {}, tol);
}

FinalBasis rotated_qubit_basis(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Vector first(2), second(2);
  first << c, s;
  second << -s, c;
  return FinalBasis::from_states({normalize(first), normalize(second)}, {"f1", "f2"});
}

}  // namespace weakmeas
