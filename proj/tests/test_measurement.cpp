#include "doctest.h"

#include "support.hpp"
#include "weakmeas/error.hpp"
#include "weakmeas/measurement.hpp"

using namespace weakmeas;
using namespace weakmeas::testing;

TEST_CASE("validate_model") {
  SUBCASE("binary model passes exactly") {
    const ModelValidation v = validate_model(MeasurementModel::binary());
    CHECK(v.ok());
    for (const auto& c : v.checks) CHECK(c.residual == 0.0);
  }
  SUBCASE("biased correlations fail unbiasedness") {
    const ModelValidation v = validate_model(MeasurementModel({0.5, 0.5}, {1.0, 1.0}));
    CHECK_FALSE(v.ok());
    REQUIRE(v.find("unbiased_correlation") != nullptr);
    CHECK_FALSE(v.find("unbiased_correlation")->passed);
    CHECK(v.find("unbiased_correlation")->residual == doctest::Approx(1.0));
    CHECK(v.find("correlation_normalization")->passed);
    CHECK(v.describe_failures().find("unbiased_correlation") != std::string::npos);
  }
  SUBCASE("asymmetric model passes") {
    const ModelValidation v = validate_model(asymmetric_model());
    CHECK(v.ok());
    CHECK(v.find("unbiased_correlation")->residual <= 1e-15);
    CHECK(v.find("correlation_normalization")->residual <= 1e-15);
  }
  SUBCASE("single outcome and non-positive weight") {
    CHECK_FALSE(validate_model(MeasurementModel({1.0}, {1.0})).ok());
    CHECK_FALSE(validate_model(MeasurementModel({1.5, -0.5}, {0.0, 0.0})).find("positive_weights")->passed);
  }
  SUBCASE("shape errors") {
    CHECK_THROWS_AS(MeasurementModel({0.5, 0.5}, {1.0}), Error);
    CHECK_THROWS_AS(MeasurementModel({"a", "a"}, {0.5, 0.5}, {1.0, -1.0}), Error);
  }
}

TEST_CASE("kraus_operator") {
  const auto model = MeasurementModel::binary();
  const Observable z = pauli_z();
  const double s = 1.0 / std::sqrt(2.0);

  Matrix expected = s * Matrix::Identity(2, 2);
  CHECK(max_abs(kraus_operator(model, "+", z, Epsilon{0.0}) - expected) <= 1e-15);

  expected = Matrix::Zero(2, 2);
  expected(0, 0) = s * 1.1;
  expected(1, 1) = s * 0.9;
  CHECK(max_abs(kraus_operator(model, "+", z, Epsilon{0.1}) - expected) <= 1e-15);
  expected(0, 0) = s * 0.9;
  expected(1, 1) = s * 1.1;
  CHECK(max_abs(kraus_operator(model, "-", z, Epsilon{0.1}) - expected) <= 1e-15);

  try {
    kraus_operator(model, "0", z, Epsilon{0.1});
    FAIL("expected UnknownOutcome");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownOutcome);
  }
}

TEST_CASE("Kraus completeness: sum E^dagger E = 1 + eps^2 A^2") {
  Random rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = rng.dim(2, 6);
    const auto model = trial % 2 ? rng.model(rng.dim(2, 5)) : MeasurementModel::binary();
    const Observable a = rng.hermitian(n);
    const Epsilon eps{rng.uniform(-0.1, 0.1)};
    Matrix sum = Matrix::Zero(a.matrix().rows(), a.matrix().cols());
    for (std::size_t m = 0; m < model.size(); ++m) {
      const Matrix e = kraus_operator(model, m, a, eps);
      CHECK(hermitian_residual(e) <= 1e-15);
      sum += e.adjoint() * e;
    }
    const Matrix target = Matrix::Identity(a.matrix().rows(), a.matrix().cols()) +
                          eps.value * eps.value * a.matrix() * a.matrix();
    CHECK(max_abs(sum - target) <= 1e-12);
  }
}

TEST_CASE("joint_prob_linear") {
  const auto model = MeasurementModel::binary();
  const Observable z = pauli_z();

  SUBCASE("eigenbasis at eps = 0.05") {
    const auto d = joint_prob_linear(model, z, psi_a(), computational_basis(2), Epsilon{0.05});
    // 1/2 * 1/2 * (1 +- 2 * 0.05)
    CHECK(d.at(0, 0) == doctest::Approx(0.275).epsilon(1e-14));
    CHECK(d.at(1, 0) == doctest::Approx(0.225).epsilon(1e-14));
    CHECK(d.at(0, 1) == doctest::Approx(0.225).epsilon(1e-14));
    CHECK(d.at(1, 1) == doctest::Approx(0.275).epsilon(1e-14));
    CHECK(d.warnings.empty());
  }
  SUBCASE("eps = 0 reduces to w_m p(f)") {
    Random rng(8);
    const State psi = rng.state(4);
    const FinalBasis b = rng.basis(4);
    const auto m3 = rng.model(3);
    const auto d = joint_prob_linear(m3, rng.hermitian(4), psi, b, Epsilon{0.0});
    for (std::size_t m = 0; m < 3; ++m) {
      for (std::size_t f = 0; f < 4; ++f) {
        CHECK(d.at(m, f) == doctest::Approx(m3.weights()[m] * std::norm(inner(b[f], psi))).epsilon(1e-14));
      }
    }
  }
  SUBCASE("anomalous weak value 3 on f1") {
    const auto d = joint_prob_linear(model, z, psi_a(), basis_f(), Epsilon{0.05});
    // 1/2 * 1/10 * (1 + 0.1 * 3)
    CHECK(d.at(0, 0) == doctest::Approx(0.065).epsilon(1e-13));
    CHECK(d.total() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("large coupling: negative entries flagged, not clamped") {
    // weak value 3 on f1 and kappa = -1: 1 - 2 * 0.5 * 3 < 0
    const auto d = joint_prob_linear(model, z, psi_a(), basis_f(), Epsilon{0.5});
    CHECK(d.at(1, 0) < 0.0);
    CHECK(d.has_negative());
    CHECK(d.warnings.size() == 2);
  }
  SUBCASE("orthogonal post-selection drops the correction") {
    const State zero = State::basis_vector(2, 0);
    const auto d = joint_prob_linear(model, pauli_x(), zero, computational_basis(2), Epsilon{0.1});
    CHECK(d.at(0, 1) == 0.0);
    CHECK(d.at(1, 1) == 0.0);
  }
}

TEST_CASE("joint_prob_exact") {
  const auto model = MeasurementModel::binary();
  const Observable z = pauli_z();

  SUBCASE("eps = 0 matches the first-order engine") {
    const auto lin = joint_prob_linear(model, z, psi_a(), basis_f(), Epsilon{0.0});
    const auto ex = joint_prob_exact(model, z, psi_a(), basis_f(), Epsilon{0.0});
    for (std::size_t i = 0; i < lin.entries.size(); ++i) {
      CHECK(std::abs(lin.entries[i] - ex.entries[i]) <= 1e-15);
    }
  }
  SUBCASE("closed form at eps = 0.1") {
    const auto d = joint_prob_exact(model, z, psi_a(), computational_basis(2), Epsilon{0.1});
    // |<0|E_+|psi_A>|^2 = 1/2 * 1.1^2 / 2, N = 1.01
    const double expected = 0.5 * 0.5 * 1.1 * 1.1 / 1.01;
    CHECK(d.at(0, 0) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(d.at(0, 0) == doctest::Approx(0.299505).epsilon(1e-6));
    CHECK(d.total() == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("first-order error bounded by 2 eps^2 <A^2>") {
    for (double eps : {0.01, 0.02, 0.05}) {
      const auto lin = joint_prob_linear(model, z, psi_a(), computational_basis(2), Epsilon{eps});
      const auto ex = joint_prob_exact(model, z, psi_a(), computational_basis(2), Epsilon{eps});
      double worst = 0.0;
      for (std::size_t i = 0; i < lin.entries.size(); ++i) {
        worst = std::max(worst, std::abs(lin.entries[i] - ex.entries[i]));
      }
      CHECK(worst <= 2.0 * eps * eps * 1.0);
    }
  }
}

TEST_CASE("joint distributions: normalization, marginals and phase invariance") {
  Random rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = rng.dim(2, 6);
    const auto model = rng.model(rng.dim(2, 4));
    const Observable a = rng.hermitian(n);
    const State psi = rng.state(n);
    const FinalBasis basis = rng.basis(n);
    const double a2 = expectation_squared(a, psi);
    const Epsilon eps{0.02 / std::max(1.0, a.spectral_norm() * model.max_abs_correlation())};

    const auto ex = joint_prob_exact(model, a, psi, basis, eps);
    CHECK(ex.total() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(ex.has_negative());
    const auto marginal = ex.marginal_basis();
    for (std::size_t f = 0; f < n; ++f) {
      CHECK(std::abs(marginal[f] - std::norm(inner(basis[f], psi))) <= 2.0 * eps.value * eps.value * a2 + 1e-15);
    }
    const auto lin = joint_prob_linear(model, a, psi, basis, eps);
    CHECK(lin.total() == doctest::Approx(1.0).epsilon(1e-12));

    // Global phases on psi and on every basis vector.
    const Complex phase = std::polar(1.0, rng.uniform(-3.0, 3.0));
    const State rotated_psi = normalize(phase * psi.amplitudes());
    std::vector<State> rotated;
    for (const auto& f : basis.vectors()) {
      rotated.push_back(normalize(std::polar(1.0, rng.uniform(-3.0, 3.0)) * f.amplitudes()));
    }
    const FinalBasis rotated_basis = FinalBasis::from_states(rotated);
    const auto ex2 = joint_prob_exact(model, a, rotated_psi, rotated_basis, eps);
    const auto lin2 = joint_prob_linear(model, a, rotated_psi, rotated_basis, eps);
    for (std::size_t i = 0; i < ex.entries.size(); ++i) {
      CHECK(std::abs(ex.entries[i] - ex2.entries[i]) <= 1e-12);
      CHECK(std::abs(lin.entries[i] - lin2.entries[i]) <= 1e-12);
    }
  }
}

TEST_CASE("log_derivative") {
  const auto model = MeasurementModel::binary();
  const Observable z = pauli_z();
  CHECK(log_derivative(model, z, psi_a(), State::basis_vector(2, 0), "+") == doctest::Approx(2.0));
  CHECK(log_derivative(model, z, psi_a(), f1(), "-") == doctest::Approx(-6.0).epsilon(1e-14));

  Random rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const State f = rng.state(3);
    const State psi = rng.state(3);
    CHECK(log_derivative(model, Observable::identity(3), psi, f, "+") == doctest::Approx(2.0).epsilon(1e-12));
  }

  try {
    log_derivative(model, z, State::basis_vector(2, 0), State::basis_vector(2, 1), "+");
    FAIL("expected UndefinedWeakValue");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UndefinedWeakValue);
  }
}

TEST_CASE("log_derivative matches central differences of the exact distribution") {
  // Central differences of ln p carry a truncation error of about (2/3) delta^2 |kappa A_w|^3,
  // so the step is scaled by r = |kappa| ||A|| / |<f|psi>|, an upper bound on |kappa A_w|
  // computed from raw overlaps.
  Random rng(99);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = rng.dim(2, 6);
    const auto model = rng.model(rng.dim(2, 4));
    const Observable a = rng.hermitian(n);
    const State psi = rng.state(n);
    const FinalBasis basis = rng.basis(n);
    const auto zero = joint_prob_exact(model, a, psi, basis, Epsilon{0.0});
    for (std::size_t m = 0; m < model.size(); ++m) {
      for (std::size_t f = 0; f < n; ++f) {
        if (zero.at(m, f) < 1e-6) continue;
        const double r = std::abs(model.correlations()[m]) * a.spectral_norm() / std::abs(inner(basis[f], psi));
        const double delta = 1e-4 / std::max(1.0, r);
        const auto plus = joint_prob_exact(model, a, psi, basis, Epsilon{delta});
        const auto minus = joint_prob_exact(model, a, psi, basis, Epsilon{-delta});
        const double fd = (std::log(plus.at(m, f)) - std::log(minus.at(m, f))) / (2.0 * delta);
        CHECK(std::abs(fd - log_derivative(model, a, psi, basis[f], m)) <= 1e-5);
        ++checked;
      }
    }
  }
  CHECK(checked > 500);
}
