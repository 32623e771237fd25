#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "weakmeas/hilbert.hpp"
#include "weakmeas/measurement.hpp"

namespace weakmeas::testing {

inline State make_state(std::initializer_list<Complex> amps) {
  Vector v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (auto a : amps) v(i++) = a;
  return normalize(v);
}

inline Observable pauli_z() { return Observable::diagonal(std::vector<double>{1.0, -1.0}); }

inline Observable pauli_x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return Observable::from_matrix(m);
}

// FIX-A: (|0> + |1>)/sqrt2.  FIX-B: (sqrt3|0> + |1>)/2.
inline State psi_a() { return make_state({1.0, 1.0}); }
inline State psi_b() { return make_state({std::sqrt(3.0), 1.0}); }

// FIX-F: (2|0> - |1>)/sqrt5, (|0> + 2|1>)/sqrt5.
inline State f1() { return make_state({2.0, -1.0}); }
inline State f2() { return make_state({1.0, 2.0}); }
inline FinalBasis basis_f() { return FinalBasis::from_states({f1(), f2()}); }

inline FinalBasis computational_basis(std::size_t dim) {
  std::vector<State> v;
  for (std::size_t i = 0; i < dim; ++i) v.push_back(State::basis_vector(dim, i));
  return FinalBasis::from_states(std::move(v));
}

// (|0> + i|1>)/sqrt2, (|0> - i|1>)/sqrt2.
inline FinalBasis imaginary_basis() {
  const Complex i(0.0, 1.0);
  return FinalBasis::from_states({make_state({1.0, i}), make_state({1.0, -i})});
}

// w = (1/4, 3/4), kappa = (sqrt3, -1/sqrt3).
inline MeasurementModel asymmetric_model() {
  return MeasurementModel({0.25, 0.75}, {std::sqrt(3.0), -1.0 / std::sqrt(3.0)});
}

/// Random instances for property tests. Independent of the library's own constructions.
class Random {
 public:
  explicit Random(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
  std::size_t dim(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(gen_);
  }

  Matrix complex_matrix(std::size_t n, bool real_only = false) {
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        m(r, c) = Complex(normal(), real_only ? 0.0 : normal());
      }
    }
    return m;
  }

  Observable hermitian(std::size_t n, bool real_only = false) {
    const Matrix g = complex_matrix(n, real_only);
    Matrix h = (g + g.adjoint()) / 2.0;
    return Observable::from_matrix(h);
  }

  State state(std::size_t n, bool real_only = false) {
    Vector v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(normal(), real_only ? 0.0 : normal());
    return normalize(v);
  }

  /// Haar-like unitary columns via QR of a Gaussian matrix.
  FinalBasis basis(std::size_t n, bool real_only = false) {
    const Matrix g = complex_matrix(n, real_only);
    Eigen::HouseholderQR<Matrix> qr(g);
    const Matrix q = qr.householderQ() * Matrix::Identity(g.rows(), g.cols());
    std::vector<State> states;
    for (Eigen::Index k = 0; k < q.cols(); ++k) states.push_back(normalize(q.col(k)));
    return FinalBasis::from_states(std::move(states));
  }

  /// Valid model with `n` outcomes: random weights, kappa shifted to zero mean and scaled
  /// to unit second moment.
  MeasurementModel model(std::size_t n) {
    std::vector<double> w(n), k(n);
    double sum = 0.0;
    for (auto& x : w) sum += (x = uniform(0.1, 1.0));
    for (auto& x : w) x /= sum;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += w[i] * (k[i] = uniform());
    double second = 0.0;
    for (std::size_t i = 0; i < n; ++i) second += w[i] * (k[i] - mean) * (k[i] - mean);
    for (std::size_t i = 0; i < n; ++i) k[i] = (k[i] - mean) / std::sqrt(second);
    return MeasurementModel(w, k);
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace weakmeas::testing
