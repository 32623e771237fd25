#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "weakmeas/hilbert.hpp"
#include "weakmeas/measurement.hpp"
#include "weakmeas/tolerances.hpp"

namespace weakmeas {

/// <f|A|psi> / <f|psi>. Throws UndefinedWeakValue when |<f|psi>|^2 < tol.overlap_floor.
Complex weak_value(const Observable& a, const State& psi, const State& f,
                   const Tolerances& tol = kDefaultTolerances);

struct WeakValueEntry {
  std::string label;
  double post_prob = 0.0;     // |<f|psi>|^2
  Complex weak_value{};       // zero when undefined
  Complex numerator{};        // <f|A|psi>
  bool defined = false;
};

struct WeakValueTable {
  std::vector<WeakValueEntry> entries;

  /// Largest |A_w| over defined entries.
  double max_abs_weak_value() const;
};

WeakValueTable weak_value_table(const Observable& a, const State& psi, const FinalBasis& basis,
                                const Tolerances& tol = kDefaultTolerances);

struct FisherReport {
  std::vector<std::string> labels;
  std::vector<double> contributions;  // 4 p(f) Re[A_w]^2
  double total = 0.0;                 // 1 / delta_eps^2
  double delta_eps = 0.0;             // +inf when total == 0
  bool basis_is_real = false;
  double max_abs_weak_value = 0.0;
};

/// Fisher information for eps at eps = 0 from the joint (m, f) statistics.
///
/// Each contribution is evaluated as 4 (Re[<psi|f><f|A|psi>])^2 / |<f|psi>|^2, which equals
/// 4 p(f) Re[A_w]^2 without forming the weak value. Outcomes with |<f|psi>|^2 below the
/// overlap floor have p(m,f) = O(eps^2); their contribution is the eps -> 0 limit of
/// sum_m p'^2 / p, namely 4 |<f|A|psi>|^2. The model only enters through
/// sum_m w_m kappa_m^2 = 1. Throws InvalidModel.
FisherReport fisher_information(const MeasurementModel& model, const Observable& a,
                                const State& psi, const FinalBasis& basis,
                                const Tolerances& tol = kDefaultTolerances);

/// Fisher information for an imaginary (phase-like) coupling: 4 sum_f p(f) Im[A_w]^2, with the
/// same orthogonal-outcome limit as fisher_information().
double fisher_phase(const Observable& a, const State& psi, const FinalBasis& basis,
                    const Tolerances& tol = kDefaultTolerances);

/// True iff every defined weak value satisfies |Im A_w| sqrt(p(f)) <= `threshold`.
bool is_real_basis(const Observable& a, const State& psi, const FinalBasis& basis,
                   double threshold = kDefaultTolerances.structural,
                   const Tolerances& tol = kDefaultTolerances);

/// 4 <psi|A^2|psi>, the Fisher information reached by every real-weak-value basis.
double max_sensitivity(const Observable& a, const State& psi);

/// Eigenvectors of A in ascending eigenvalue order.
FinalBasis eigenbasis_strategy(const Observable& a);

/// Basis whose first vector is A|psi>/||A|psi>||; every other vector is orthogonal to A|psi>
/// and so has weak value 0. Throws ShuntUndefined when ||A psi|| < 1e-12 or |<A>| < 1e-10.
FinalBasis shunted_basis(const Observable& a, const State& psi,
                         const Tolerances& tol = kDefaultTolerances);

/// Seeded random real orthogonal basis. Throws NotRealRepresentable unless A and psi have
/// real entries (within 1e-12).
FinalBasis real_random_basis(const Observable& a, const State& psi, std::uint64_t seed,
                             const Tolerances& tol = kDefaultTolerances);

/// Rotated qubit basis (cos t|0> + sin t|1>, -sin t|0> + cos t|1>).
FinalBasis rotated_qubit_basis(double theta);

}  // namespace weakmeas
