#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "weakmeas/tolerances.hpp"

namespace weakmeas {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Normalized pure state over a finite Hilbert space (dim >= 2).
class State {
 public:
  /// Validates unit norm within `tol.normalization`; throws NotNormalized otherwise.
  static State from_amplitudes(Vector amplitudes, const Tolerances& tol = kDefaultTolerances);
  /// Computational basis vector |index>.
  static State basis_vector(std::size_t dim, std::size_t index);

  const Vector& amplitudes() const noexcept { return amplitudes_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
  Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

  bool operator==(const State& other) const { return amplitudes_ == other.amplitudes_; }

 private:
  explicit State(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {}
  friend State normalize(const Vector& v);

  Vector amplitudes_;
};

/// Hermitian operator; the target observable of the weak measurement.
class Observable {
 public:
  /// Throws NotHermitian when max|M - M^dagger| exceeds `tol.hermitian`.
  static Observable from_matrix(Matrix matrix, const Tolerances& tol = kDefaultTolerances);
  static Observable identity(std::size_t dim);
  static Observable diagonal(std::span<const double> entries);

  const Matrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }

  /// Largest singular value (equals the largest |eigenvalue| for Hermitian input).
  double spectral_norm() const;

 private:
  explicit Observable(Matrix matrix) : matrix_(std::move(matrix)) {}

  Matrix matrix_;
};

/// Max-entry magnitude of (M - M^dagger).
double hermitian_residual(const Matrix& m);

/// Complete orthonormal basis for the final projective measurement.
class FinalBasis {
 public:
  /// Validates count == dim and pairwise orthonormality within `tol.structural`.
  /// Labels default to "f0", "f1", ...
  static FinalBasis from_states(std::vector<State> vectors, std::vector<std::string> labels = {},
                                const Tolerances& tol = kDefaultTolerances);

  const std::vector<State>& vectors() const noexcept { return vectors_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return vectors_.size(); }
  std::size_t dim() const noexcept { return vectors_.empty() ? 0 : vectors_.front().dim(); }
  const State& operator[](std::size_t i) const { return vectors_[i]; }

  /// Columns are the basis vectors.
  Matrix as_matrix() const;

 private:
  FinalBasis(std::vector<State> vectors, std::vector<std::string> labels)
      : vectors_(std::move(vectors)), labels_(std::move(labels)) {}

  std::vector<State> vectors_;
  std::vector<std::string> labels_;
};

/// Max over i,j of |<v_i|v_j> - delta_ij|.
double orthonormality_residual(std::span<const State> vectors);

/// <a|b>, conjugate-linear in `a`. Throws DimMismatch.
Complex inner(const State& a, const State& b);

/// v / ||v||. Throws ZeroVector when ||v|| <= 1e-14.
State normalize(const Vector& v);

/// |<a|b>| == 1 within `tol`: equality up to a global phase.
bool same_up_to_phase(const State& a, const State& b, double tol = 1e-10);

struct Eigensystem {
  std::vector<double> eigenvalues;  // ascending
  FinalBasis eigenbasis;
};

Eigensystem eig_hermitian(const Observable& a);

/// Extends an orthonormal set to a full basis by Gram-Schmidt over canonical unit vectors
/// taken in index order. The input vectors are kept verbatim as the leading entries.
/// Throws NotOrthonormal when the input is not orthonormal within `tol.structural`.
FinalBasis complete_basis(std::span<const State> partial, std::size_t dim,
                          const Tolerances& tol = kDefaultTolerances);

/// <psi|A|psi> and <psi|A^2|psi> = ||A psi||^2.
double expectation(const Observable& a, const State& psi);
double expectation_squared(const Observable& a, const State& psi);

}  // namespace weakmeas
