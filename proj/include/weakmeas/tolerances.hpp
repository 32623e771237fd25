#pragma once

namespace weakmeas {

/// Every numeric threshold used by the library, in one place.
struct Tolerances {
  /// Normalization of states and probability sums.
  double normalization = 1e-12;
  /// Hermiticity residual of observables (max entry magnitude).
  double hermitian = 1e-12;
  /// Orthonormality of basis vectors, eigen-equation checks, real-weak-value test.
  double structural = 1e-10;
  /// Sums accumulated over many terms (Fisher totals).
  double accumulated = 1e-9;
  /// Measurement-model invariants (sum of weights, first and second moments of kappa).
  double model = 1e-12;
  /// Post-selection probability |<f|psi>|^2 below which a weak value is undefined.
  double overlap_floor = 1e-24;
  /// Residual norm below which a Gram-Schmidt candidate is skipped.
  double gram_schmidt_floor = 1e-10;
  /// |eps| * max|kappa| * ||A||_2 above which the first-order model is flagged.
  double weak_regime = 0.2;
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace weakmeas
