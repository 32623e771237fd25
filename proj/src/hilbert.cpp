#include "weakmeas/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "weakmeas/error.hpp"

namespace weakmeas {
namespace {

constexpr double kZeroNorm = 1e-14;

std::string format_residual(double r) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << r;
  return os.str();
}

void require_dim(std::size_t dim) {
  if (dim < 2) {
    throw Error(ErrorCode::InvalidArgument, "Hilbert space dimension must be >= 2, got " +
                                                std::to_string(dim));
  }
}

}  // namespace

State State::from_amplitudes(Vector amplitudes, const Tolerances& tol) {
  require_dim(static_cast<std::size_t>(amplitudes.size()));
  const double residual = std::abs(amplitudes.squaredNorm() - 1.0);
  if (!(residual <= tol.normalization)) {
    throw Error(ErrorCode::NotNormalized, "state norm residual " + format_residual(residual));
  }
  return State(std::move(amplitudes));
}

State State::basis_vector(std::size_t dim, std::size_t index) {
  require_dim(dim);
  if (index >= dim) {
    throw Error(ErrorCode::InvalidArgument, "basis index out of range");
  }
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return State(std::move(v));
}

State normalize(const Vector& v) {
  require_dim(static_cast<std::size_t>(v.size()));
  const double norm = v.norm();
  if (!(norm > kZeroNorm)) {
    throw Error(ErrorCode::ZeroVector, "cannot normalize a vector of norm " + format_residual(norm));
  }
  return State(v / norm);
}

Complex inner(const State& a, const State& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimMismatch, "inner product of dim " + std::to_string(a.dim()) +
                                            " and dim " + std::to_string(b.dim()));
  }
  return a.amplitudes().dot(b.amplitudes());
}

bool same_up_to_phase(const State& a, const State& b, double tol) {
  return std::abs(std::abs(inner(a, b)) - 1.0) <= tol;
}

double hermitian_residual(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Observable Observable::from_matrix(Matrix matrix, const Tolerances& tol) {
  if (matrix.rows() != matrix.cols()) {
    throw Error(ErrorCode::DimMismatch, "observable matrix must be square");
  }
  require_dim(static_cast<std::size_t>(matrix.rows()));
  const double residual = hermitian_residual(matrix);
  if (!(residual <= tol.hermitian)) {
    throw Error(ErrorCode::NotHermitian,
                "observable hermiticity residual " + format_residual(residual));
  }
  return Observable(std::move(matrix));
}

Observable Observable::identity(std::size_t dim) {
  require_dim(dim);
  const auto n = static_cast<Eigen::Index>(dim);
  return Observable(Matrix::Identity(n, n));
}

Observable Observable::diagonal(std::span<const double> entries) {
  require_dim(entries.size());
  const auto n = static_cast<Eigen::Index>(entries.size());
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = entries[static_cast<std::size_t>(i)];
  return Observable(std::move(m));
}

double Observable::spectral_norm() const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double orthonormality_residual(std::span<const State> vectors) {
  double worst = 0.0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = i; j < vectors.size(); ++j) {
      const Complex g = inner(vectors[i], vectors[j]);
      const double r = std::abs(g - (i == j ? Complex(1.0) : Complex(0.0)));
      worst = std::max(worst, r);
    }
  }
  return worst;
}

FinalBasis FinalBasis::from_states(std::vector<State> vectors, std::vector<std::string> labels,
                                   const Tolerances& tol) {
  if (vectors.empty()) {
    throw Error(ErrorCode::NotOrthonormal, "basis is empty");
  }
  const std::size_t dim = vectors.front().dim();
  for (const auto& v : vectors) {
    if (v.dim() != dim) throw Error(ErrorCode::DimMismatch, "basis vectors differ in dimension");
  }
  if (vectors.size() != dim) {
    throw Error(ErrorCode::NotOrthonormal, "basis has " + std::to_string(vectors.size()) +
                                               " vectors in dimension " + std::to_string(dim));
  }
  const double residual = orthonormality_residual(vectors);
  if (!(residual <= tol.structural)) {
    throw Error(ErrorCode::NotOrthonormal,
                "basis orthonormality residual " + format_residual(residual));
  }
  if (labels.empty()) {
    labels.reserve(vectors.size());
    for (std::size_t i = 0; i < vectors.size(); ++i) labels.push_back("f" + std::to_string(i));
  } else if (labels.size() != vectors.size()) {
    throw Error(ErrorCode::InvalidArgument, "basis label count does not match vector count");
  }
  return FinalBasis(std::move(vectors), std::move(labels));
}

Matrix FinalBasis::as_matrix() const {
  const auto n = static_cast<Eigen::Index>(dim());
  Matrix m(n, static_cast<Eigen::Index>(size()));
  for (std::size_t k = 0; k < size(); ++k) m.col(static_cast<Eigen::Index>(k)) = vectors_[k].amplitudes();
  return m;
}

Eigensystem eig_hermitian(const Observable& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::InvalidArgument, "eigendecomposition did not converge");
  }
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  // Eigen returns ascending eigenvalues; columns are renormalized to absorb rounding.
  std::vector<double> eigenvalues;
  std::vector<State> states;
  eigenvalues.reserve(a.dim());
  states.reserve(a.dim());
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    eigenvalues.push_back(values(k));
    states.push_back(normalize(vectors.col(k)));
  }
  return Eigensystem{std::move(eigenvalues), FinalBasis::from_states(std::move(states))};
}

FinalBasis complete_basis(std::span<const State> partial, std::size_t dim, const Tolerances& tol) {
  require_dim(dim);
  if (partial.size() > dim) {
    throw Error(ErrorCode::NotOrthonormal, "more input vectors than the dimension");
  }
  for (const auto& v : partial) {
    if (v.dim() != dim) throw Error(ErrorCode::DimMismatch, "input vector has wrong dimension");
  }
  const double residual = orthonormality_residual(partial);
  if (!(residual <= tol.structural)) {
    throw Error(ErrorCode::NotOrthonormal,
                "input orthonormality residual " + format_residual(residual));
  }

  std::vector<State> basis(partial.begin(), partial.end());
  for (std::size_t k = 0; k < dim && basis.size() < dim; ++k) {
    Vector candidate = State::basis_vector(dim, k).amplitudes();
    // Two passes of modified Gram-Schmidt keep the result orthogonal to working precision.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) candidate -= b.amplitudes().dot(candidate) * b.amplitudes();
    }
    if (candidate.norm() < tol.gram_schmidt_floor) continue;
    basis.push_back(normalize(candidate));
  }
  return FinalBasis::from_states(std::move(basis), {}, tol);
}

double expectation(const Observable& a, const State& psi) {
  if (a.dim() != psi.dim()) throw Error(ErrorCode::DimMismatch, "observable/state dimension");
  return psi.amplitudes().dot(a.matrix() * psi.amplitudes()).real();
}

double expectation_squared(const Observable& a, const State& psi) {
  if (a.dim() != psi.dim()) throw Error(ErrorCode::DimMismatch, "observable/state dimension");
  return (a.matrix() * psi.amplitudes()).squaredNorm();
}

}  // namespace weakmeas
