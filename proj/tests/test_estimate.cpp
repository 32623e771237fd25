#include "doctest.h"

#include <numeric>

#include "support.hpp"
#include "weakmeas/analysis.hpp"
#include "weakmeas/error.hpp"
#include "weakmeas/estimate.hpp"

using namespace weakmeas;
using namespace weakmeas::testing;

namespace {

struct Stats {
  double mean = 0.0;
  double stddev = 0.0;
};

Stats stats(const std::vector<double>& xs) {
  Stats s;
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return s;
}

}  // namespace

TEST_CASE("sample_outcomes") {
  const auto model = MeasurementModel::binary();
  const Observable z = pauli_z();
  const FinalBasis eigen = computational_basis(2);

  SUBCASE("uniform cells at eps = 0 pass a chi-square test") {
    int passed = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto c = sample_outcomes(model, z, psi_a(), eigen, Epsilon{0.0}, 1000, seed);
      double chi2 = 0.0;
      for (auto k : c.counts) chi2 += (static_cast<double>(k) - 250.0) * (static_cast<double>(k) - 250.0) / 250.0;
      if (chi2 < 16.27) ++passed;
      CHECK(std::accumulate(c.counts.begin(), c.counts.end(), std::uint64_t{0}) == 1000);
    }
    CHECK(passed >= 99);
  }
  SUBCASE("deterministic per seed") {
    const auto a = sample_outcomes(model, z, psi_a(), basis_f(), Epsilon{0.02}, 5000, 42);
    const auto b = sample_outcomes(model, z, psi_a(), basis_f(), Epsilon{0.02}, 5000, 42);
    CHECK(a == b);
    const auto c = sample_outcomes(model, z, psi_a(), basis_f(), Epsilon{0.02}, 5000, 43);
    CHECK_FALSE(a == c);
  }
  SUBCASE("single draw") {
    const auto c = sample_outcomes(model, z, psi_a(), eigen, Epsilon{0.02}, 1, 9);
    CHECK(std::count(c.counts.begin(), c.counts.end(), 1u) == 1);
    CHECK(std::count(c.counts.begin(), c.counts.end(), 0u) == 3);
  }
  SUBCASE("zero samples rejected") {
    CHECK_THROWS_AS(sample_outcomes(model, z, psi_a(), eigen, Epsilon{0.02}, 0, 9), Error);
  }
  SUBCASE("zero-probability cells are never drawn") {
    // f = |1> is orthogonal to |0> and A = sigma_z keeps it that way at any eps.
    const auto c = sample_outcomes(model, z, State::basis_vector(2, 0), eigen, Epsilon{0.1}, 10000, 3);
    CHECK(c.at(0, 1) == 0);
    CHECK(c.at(1, 1) == 0);
  }
}

TEST_CASE("mle_epsilon") {
  const auto model = MeasurementModel::binary();
  const Observable z = pauli_z();
  const FinalBasis eigen = computational_basis(2);

  SUBCASE("consistent at eps = 0") {
    int within = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const auto c = sample_outcomes(model, z, psi_a(), eigen, Epsilon{0.0}, 20000, seed);
      const auto r = mle_epsilon(c, model, z, psi_a(), eigen);
      CHECK(r.converged);
      CHECK(r.stderr_predicted == doctest::Approx(1.0 / std::sqrt(4.0 * 20000)));
      if (std::abs(r.epsilon_hat) <= 4.0 * r.stderr_predicted) ++within;
    }
    CHECK(within >= 190);
  }
  SUBCASE("converged results have a vanishing score") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto c = sample_outcomes(model, z, psi_a(), basis_f(), Epsilon{0.03}, 10000, seed);
      const auto r = mle_epsilon(c, model, z, psi_a(), basis_f());
      REQUIRE(r.converged);
      // Central difference of the log-likelihood built directly from joint_prob_exact.
      auto loglik = [&](double e) {
        const auto d = joint_prob_exact(model, z, psi_a(), basis_f(), Epsilon{e});
        double l = 0.0;
        for (std::size_t i = 0; i < d.entries.size(); ++i) l += static_cast<double>(c.counts[i]) * std::log(d.entries[i]);
        return l;
      };
      const double h = 1e-6;
      const double grad = (loglik(r.epsilon_hat + h) - loglik(r.epsilon_hat - h)) / (2.0 * h);
      CHECK(std::abs(grad) <= 1e-3 * static_cast<double>(c.n_total));
      CHECK(r.log_likelihood == doctest::Approx(loglik(r.epsilon_hat)).epsilon(1e-12));
    }
  }
  SUBCASE("degenerate counts with identity observable terminate") {
    SampleCounts c;
    c.n_outcomes = 2;
    c.n_basis = 2;
    c.counts = {100, 0, 0, 0};
    c.n_total = 100;
    const auto r = mle_epsilon(c, model, Observable::identity(2), psi_a(), eigen);
    CHECK(r.iterations <= 200);
    CHECK(std::abs(r.epsilon_hat) <= epsilon_search_bound(model, Observable::identity(2)) + 1e-15);
  }
  SUBCASE("grid mismatch") {
    SampleCounts c;
    c.n_outcomes = 3;
    c.n_basis = 2;
    c.counts.assign(6, 1);
    c.n_total = 6;
    CHECK_THROWS_AS(mle_epsilon(c, model, z, psi_a(), eigen), Error);
  }
  SUBCASE("standard deviation near the Cramer-Rao scale") {
    std::vector<double> hats;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const auto c = sample_outcomes(model, z, psi_a(), eigen, Epsilon{0.02}, 20000, 1000 + seed);
      hats.push_back(mle_epsilon(c, model, z, psi_a(), eigen).epsilon_hat);
    }
    const double crb = 1.0 / std::sqrt(4.0 * 20000);
    CHECK(stats(hats).stddev == doctest::Approx(crb).epsilon(0.15));
  }
}

TEST_CASE("doubling n shrinks the MLE spread by sqrt 2") {
  const auto model = MeasurementModel::binary();
  const Observable z = pauli_z();
  const FinalBasis b = basis_f();
  auto spread = [&](std::uint64_t n, std::uint64_t seed0) {
    std::vector<double> hats;
    for (std::uint64_t s = 0; s < 1000; ++s) {
      const auto c = sample_outcomes(model, z, psi_a(), b, Epsilon{0.02}, n, seed0 + s);
      hats.push_back(mle_epsilon(c, model, z, psi_a(), b).epsilon_hat);
    }
    return stats(hats).stddev;
  };
  const double ratio = spread(5000, 0) / spread(10000, 50000);
  CHECK(ratio == doctest::Approx(std::sqrt(2.0)).epsilon(0.10));
}

TEST_CASE("score_estimate") {
  const auto model = MeasurementModel::binary();
  const Observable z = pauli_z();

  SUBCASE("unbiased at eps = 0") {
    std::vector<double> xs;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const auto c = sample_outcomes(model, z, psi_a(), basis_f(), Epsilon{0.0}, 10000, seed);
      xs.push_back(score_estimate(c, model, z, psi_a(), basis_f()));
    }
    const Stats s = stats(xs);
    CHECK(std::abs(s.mean) <= 3.0 * s.stddev / std::sqrt(200.0));
  }
  SUBCASE("agrees with the MLE") {
    int agree = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const auto c = sample_outcomes(model, z, psi_a(), basis_f(), Epsilon{0.02}, 100000, seed);
      const auto r = mle_epsilon(c, model, z, psi_a(), basis_f());
      const double s = score_estimate(c, model, z, psi_a(), basis_f());
      if (std::abs(s - r.epsilon_hat) <= 2.0 * r.stderr_predicted) ++agree;
    }
    CHECK(agree >= 190);
  }
  SUBCASE("imaginary basis has no information") {
    const auto c = sample_outcomes(model, z, psi_a(), imaginary_basis(), Epsilon{0.02}, 100, 1);
    try {
      score_estimate(c, model, z, psi_a(), imaginary_basis());
      FAIL("expected ZeroInformation");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ZeroInformation);
    }
  }
}

TEST_CASE("estimation is reproducible bit for bit") {
  const auto model = MeasurementModel::binary();
  const Observable z = pauli_z();
  const FinalBasis b = real_random_basis(z, psi_a(), 5);
  const auto c1 = sample_outcomes(model, z, psi_a(), b, Epsilon{0.02}, 50000, 77);
  const auto c2 = sample_outcomes(model, z, psi_a(), b, Epsilon{0.02}, 50000, 77);
  CHECK(c1 == c2);
  CHECK(mle_epsilon(c1, model, z, psi_a(), b) == mle_epsilon(c2, model, z, psi_a(), b));
  CHECK(score_estimate(c1, model, z, psi_a(), b) == score_estimate(c2, model, z, psi_a(), b));
}
