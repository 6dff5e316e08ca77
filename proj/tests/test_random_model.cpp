#include "doctest.h"

#include <cmath>
#include <numeric>

#include "feketelab/arith.hpp"
#include "feketelab/errors.hpp"
#include "feketelab/random_model.hpp"

using namespace feketelab;
using namespace feketelab::random_model;

TEST_CASE("counter generator is a pure function of its inputs") {
  CHECK(counter_hash(1, 2, 3) == counter_hash(1, 2, 3));
  CHECK(counter_hash(1, 2, 3) != counter_hash(1, 2, 4));
  CHECK(counter_hash(1, 2, 3) != counter_hash(2, 2, 3));
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const double u = counter_uniform(9, 1, i);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("marginals of X(2) and X(3) within 3 sigma") {
  const std::uint64_t n = 1'000'000;
  std::uint64_t zero3 = 0, plus2 = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto seed = trial_seed(2024, i);
    zero3 += model_value(seed, 3) == 0;
    plus2 += model_value(seed, 2) == 1;
  }
  const double nd = static_cast<double>(n);
  const double p0 = 0.25, p1 = 1.0 / 3;
  CHECK(std::abs(zero3 / nd - p0) <= 3 * std::sqrt(p0 * (1 - p0) / nd));
  CHECK(std::abs(plus2 / nd - p1) <= 3 * std::sqrt(p1 * (1 - p1) / nd));
}

TEST_CASE("samples replay and extend multiplicatively") {
  const auto a = sample_model(77, 1000);
  const auto b = sample_model(77, 1000);
  CHECK(a.prime_values == b.prime_values);
  CHECK(a.at(1) == 1);
  for (std::uint64_t m = 1; m <= 200; ++m) {
    for (std::uint64_t n = 1; n <= 1000 / m; ++n) {
      if (std::gcd(m, n) == 1) REQUIRE(a.at(m * n) == a.at(m) * a.at(n));
    }
  }
  // X(p^2) = X(p)^2
  CHECK(a.at(49) == a.at_prime(7) * a.at_prime(7));
  const auto r = sample_rademacher(77, 1000);
  CHECK(r.at(1) == 1);
  CHECK(r.at(12) == 0);
  CHECK(r.at(15) == r.at_prime(3) * r.at_prime(5));
  for (std::uint64_t i = 0; i < r.prime_values.size(); ++i) REQUIRE(std::abs(r.prime_values[i]) == 1);
}

TEST_CASE("window values") {
  const auto s = sample_model(5, 10000);
  CHECK(window_value(s, 0.75, 2, 3) == 0.0);
  CHECK_THROWS_AS(window_value(s, 0.75, 10, 20000), DomainError);
  const arith::PrimeTable primes(10000);
  CHECK(window_value(5, primes, 0.6, 10, 5000) == doctest::Approx(window_value(s, 0.6, 10, 5000)).epsilon(1e-14));
}

TEST_CASE("window variance formula against an independent sum") {
  const arith::PrimeTable primes(2000);
  CHECK(window_variance(primes, 0.75, 10, 1000) == doctest::Approx(1.9418266242633062).epsilon(1e-13));
  CHECK(window_variance(primes, 0.55, 2, 100) == doctest::Approx(5.794552644255934).epsilon(1e-13));
}

TEST_CASE("empirical variance within 3 sigma; disjoint windows uncorrelated") {
  const arith::PrimeTable primes(10000);
  const std::uint64_t n = 100000;
  double s2 = 0, s4 = 0, cov = 0, c2a = 0, c2b = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto seed = trial_seed(31337, i);
    const double w = window_value(seed, primes, 0.55, 10, 10000);
    s2 += w * w;
    s4 += w * w * w * w;
    const double a = window_value(seed, primes, 0.8, 2, 100);
    const double b = window_value(seed, primes, 0.8, 100, 1000);
    cov += a * b;
    c2a += a * a;
    c2b += b * b;
  }
  const double nd = static_cast<double>(n);
  const double m2 = s2 / nd;
  const double se = std::sqrt((s4 / nd - m2 * m2) / nd);
  CHECK(std::abs(m2 - window_variance(primes, 0.55, 10, 10000)) <= 3 * se);
  const double corr = cov / std::sqrt(c2a * c2b);
  CHECK(std::abs(corr) <= 3 / std::sqrt(nd));
}

TEST_CASE("Rademacher partial sums") {
  const auto s = sample_rademacher(11, 1000);
  const auto sums = rademacher_sums(s, 1000);
  CHECK(sums[0] == 1);
  const auto rep = rademacher_partial_sums(s, 1000);
  CHECK(rep.count == character::sign_changes(sums, character::SignVariant::deleted_zeros).count);
  // E S(x) = f(1) = 1, every other squarefree n has mean zero
  const std::uint64_t seeds = 10000;
  double m = 0, m2 = 0;
  auto primes = std::make_shared<const arith::PrimeTable>(2000);
  for (std::uint64_t i = 0; i < seeds; ++i) {
    const double v = static_cast<double>(rademacher_sums(sample_rademacher(trial_seed(3, i), primes), 2000).back());
    m += v;
    m2 += v * v;
  }
  m /= static_cast<double>(seeds);
  const double sd = std::sqrt(m2 / static_cast<double>(seeds) - m * m);
  CHECK(std::abs(m - 1) <= 3 * sd / std::sqrt(static_cast<double>(seeds)));
}

TEST_CASE("exact enumeration against an independent script") {
  CHECK(bamo_exact(0.5, 5) == doctest::Approx(0.0625).epsilon(1e-14));
  CHECK(bamo_exact(0.3, 8) == doctest::Approx(0.11464066000000056).epsilon(1e-12));
  CHECK(bamo_exact(0.5, 10) == doctest::Approx(0.01953125).epsilon(1e-14));
  CHECK(bamo_exact(0.2, 12) == doctest::Approx(0.13526217113600544).epsilon(1e-12));
  CHECK(bamo_exact(0.0, 6) == 1.0);
  CHECK_THROWS_AS(bamo_exact(0.5, 13), CapabilityError);
  CHECK_THROWS_AS(bamo_exact(0.6, 8), DomainError);
  CHECK_THROWS_AS(bamo_exact(0.5, 4), DomainError);
}

TEST_CASE("Monte Carlo agrees with enumeration") {
  for (auto [delta, R] : {std::pair{0.5, 10ull}, std::pair{0.3, 8ull}, std::pair{0.2, 12ull}}) {
    const auto mc = bamo_check(delta, R, 100000, 99);
    const double exact = bamo_exact(delta, R);
    const double sigma = std::sqrt(exact * (1 - exact) / 100000.0);
    CHECK(std::abs(mc.probability - exact) <= 3 * sigma);
  }
  CHECK(bamo_check(0.0, 10, 1000, 1).probability == 1.0);
}

TEST_CASE("paper windows at desk scale") {
  const auto w = paper_windows(3, 3, 10'000'000);
  REQUIRE(w.size() == 3);
  CHECK(w[0].s == doctest::Approx(0.5 + 1.0 / 27));
  CHECK(w[0].u == doctest::Approx(std::exp(9.0)));
  CHECK(w[0].clipped);
  CHECK(w[2].degenerate);
  // structural disjointness v_r < u_{r+1} before clipping: M^{3r+1} < M^{3r+2}
  for (std::uint64_t r = 1; r < 5; ++r) CHECK(std::pow(3.0, 3.0 * r + 1) < std::pow(3.0, 3.0 * r + 2));
}

TEST_CASE("points simulation tail frequency and correlation") {
  std::vector<SimWindow> windows{{0.55, 10, 1000, false, false}, {0.55, 1000, 100000, false, false}};
  const auto r = sign_change_points_simulation(windows, 20000, 5);
  REQUIRE(r.windows.size() == 2);
  for (const auto& w : r.windows) {
    CHECK(w.empirical_sd == doctest::Approx(w.sigma).epsilon(0.05));
    CHECK(w.p_abs_above4 < 1e-3);
  }
  CHECK(std::abs(r.lag1_correlation) <= 3 * r.lag1_correlation_se + 1e-12);
  std::uint64_t total = 0;
  for (auto h : r.sminus_histogram) total += h;
  CHECK(total == 20000);
}
