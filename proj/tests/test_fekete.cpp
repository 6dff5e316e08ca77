#include "doctest.h"

#include <cmath>

#include "feketelab/arith.hpp"
#include "feketelab/character.hpp"
#include "feketelab/errors.hpp"
#include "feketelab/fekete.hpp"

using namespace feketelab;
using character::QuadraticCharacter;
using namespace feketelab::fekete;

TEST_CASE("direct evaluation examples") {
  const QuadraticCharacter c5(5);
  CHECK(eval_direct(c5, 0.5).value == doctest::Approx(0.1875).epsilon(1e-15));
  CHECK(eval_direct(c5, 0.0).value == 0.0);
  CHECK(eval_direct(c5, 0.3).value == doctest::Approx(0.3 * 0.49 * 1.3).epsilon(1e-14));
  CHECK_THROWS_AS(eval_direct(c5, 1.0), DomainError);
  CHECK_THROWS_AS(eval_direct(c5, -0.1), DomainError);
}

TEST_CASE("direct evaluation against high-precision values") {
  // 40-digit sums from an independent script.
  struct Case {
    std::int64_t D;
    double z, value;
  };
  for (const auto& c : {Case{173, 0.9, -0.091995297463090428}, Case{-4, 0.3, 0.273},
                        Case{997, 0.999, 0.82902044832127041}, Case{-995, 0.99, 1.8693893565897777}}) {
    const auto e = eval_direct(QuadraticCharacter(c.D), c.z);
    CHECK(std::abs(e.value - c.value) <= std::max(e.error_bound, 1e-15));
    CHECK(std::abs(e.value - c.value) <= 1e-13);
  }
}

TEST_CASE("truncated evaluation") {
  const QuadraticCharacter c5(5);
  CHECK(std::abs(eval_truncated(c5, 0.5, 1e-15).value - eval_direct(c5, 0.5).value) <= 1e-15);
  CHECK(eval_truncated(c5, 0.0, 1e-12).n_terms <= 1);
  CHECK_THROWS_AS(eval_truncated(c5, 0.5, 0.0), DomainError);

  const QuadraticCharacter big(1'000'001);
  const double z = std::exp(-1.0 / 100);
  const auto t = eval_truncated(big, z, 1e-12);
  const auto d = eval_direct(big, z);
  CHECK(std::abs(t.value - d.value) <= 1e-12 + d.error_bound);
  // tail below 1e-12, the rest is accumulated rounding over ~3000 terms
  CHECK(t.error_bound <= 1e-10);
  const double expected_terms = 100 * (12 * std::log(10.0) + std::log(100.0));
  CHECK(static_cast<double>(t.n_terms) == doctest::Approx(expected_terms).epsilon(0.05));
}

TEST_CASE("Poisson dual examples") {
  for (std::int64_t D : {5, 13}) {
    const QuadraticCharacter c(D);
    const auto dual = eval_poisson_dual(c, static_cast<double>(D));
    const auto direct = eval_direct(c, std::exp(-1.0));
    CHECK(std::abs(dual.value - direct.value) <= dual.error_bound + direct.error_bound);
  }
  CHECK_THROWS_AS(eval_poisson_dual(QuadraticCharacter(-4), 2.0), DomainError);
  CHECK_THROWS_AS(eval_poisson_dual(QuadraticCharacter(13), 0.5), DomainError);
  CHECK_THROWS_AS(eval_poisson_dual(QuadraticCharacter(13), 14.0), DomainError);
}

TEST_CASE("Poisson dual against high-precision values") {
  struct Case {
    std::int64_t D;
    double T, value;
  };
  for (const auto& c : {Case{173, 10, 0.5023896148205429}, Case{173, 86.5, 0.084243758896870587},
                        Case{997, 31.575, 0.89756065388680467}}) {
    const auto e = eval_poisson_dual(QuadraticCharacter(c.D), c.T);
    CHECK(std::abs(e.value - c.value) <= e.error_bound + 1e-15);
  }
}

TEST_CASE("Poisson dual containment over small D") {
  for (auto D : arith::fundamental_values(120, arith::Sign::positive)) {
    const QuadraticCharacter c(D);
    const double q = static_cast<double>(D);
    for (double T : {std::sqrt(q), q / 2, q}) {
      if (T < 1) continue;
      const auto dual = eval_poisson_dual(c, T);
      const auto direct = eval_direct(c, std::exp(-T / q));
      REQUIRE(std::abs(dual.value - direct.value) <= dual.error_bound + direct.error_bound);
    }
  }
}

TEST_CASE("batched evaluation matches single evaluation") {
  const QuadraticCharacter c(1009);
  const std::vector<double> zs{0.1, 0.5, 0.9, 0.99, 0.999};
  const auto many = eval_many(c, zs);
  for (std::size_t i = 0; i < zs.size(); ++i) {
    const auto one = eval_direct(c, zs[i]);
    CHECK(std::abs(many[i].value - one.value) <= many[i].error_bound + one.error_bound);
  }
}

TEST_CASE("grid counts on F_5 and empty intervals") {
  const QuadraticCharacter c5(5);
  CHECK(count_zeros_grid(c5, 0, 0.99, 10000).count == 0);
  const auto e = count_zeros_grid(c5, 0.3, 0.3, 10);
  CHECK(e.count == 0);
}

TEST_CASE("Sturm examples") {
  const QuadraticCharacter c5(5);
  CHECK(count_zeros_sturm(c5, 0, 1).count == 0);
  CHECK(count_zeros_sturm(c5, -2, 0).count == 1);
  // Pre-build exact oracle: F_8 has no zero in (0, 1).
  CHECK(count_zeros_sturm(QuadraticCharacter(8), 0, 1).count == 0);
  CHECK_THROWS_AS(count_zeros_sturm(QuadraticCharacter(1009), 0, 1), CapabilityError);
}

TEST_CASE("smallest positive D with a zero in (0, 1) is 173") {
  // Independent exact oracle (rational root counting) gives 173 with two zeros.
  std::int64_t first = 0;
  for (auto D : arith::fundamental_values(200, arith::Sign::positive)) {
    if (count_zeros_sturm(QuadraticCharacter(D), 0, 1).count > 0) {
      first = D;
      break;
    }
  }
  CHECK(first == 173);
  const QuadraticCharacter c(173);
  CHECK(count_zeros_sturm(c, 0, 1).count == 2);
  CHECK(count_zeros_grid(c, 0, 0.999, 4096).count == 2);
}

TEST_CASE("grid <= Sturm <= Jensen") {
  for (auto D : arith::fundamental_values(200, arith::Sign::both)) {
    const QuadraticCharacter c(D);
    const auto grid = count_zeros_grid(c, 0, 0.999, 2048).count;
    const auto exact = count_zeros_sturm(c, 0, 0.999).count;
    REQUIRE(grid <= exact);
    REQUIRE(exact <= descartes_upper_bound(c));
  }
  const QuadraticCharacter c5(5);
  const auto j = jensen_upper_bound(c5, 0.5, 0.1, 0.4, 0.1875);
  CHECK(j >= count_zeros_sturm(c5, 0.4, 0.6).count);
  CHECK_THROWS_AS(jensen_upper_bound(c5, 0.5, 0.3999, 0.4, 0.1875), DomainError);
  CHECK_THROWS_AS(jensen_upper_bound(c5, 0.5, 0.1, 0.4, 0.0), DomainError);
}

TEST_CASE("Jensen cover bounds the exact count") {
  const QuadraticCharacter c(173);
  std::vector<double> centers;
  for (double z = 0.05; z < 0.999; z += 0.5 * (1 - z)) centers.push_back(z);
  const auto cover = jensen_cover(c, centers);
  CHECK(cover.total_bound >= count_zeros_sturm(c, 0.05, 0.999).count);
}

TEST_CASE("Descartes bound against an independent variation count") {
  CHECK(descartes_upper_bound(QuadraticCharacter(173)) == 2);
  CHECK(descartes_upper_bound(QuadraticCharacter(5)) == 0);
  CHECK(descartes_upper_bound(QuadraticCharacter(229)) == 0);
  CHECK(descartes_upper_bound(QuadraticCharacter(-4)) == 0);
  CHECK(descartes_upper_bound(QuadraticCharacter(-23)) == 0);
  CHECK(descartes_upper_bound(QuadraticCharacter(1009)) == 0);
  CHECK(descartes_upper_bound(QuadraticCharacter(-1019)) == 2);
}

TEST_CASE("bek bound") {
  CHECK(bek_bound(0.5) == 16);
  CHECK(bek_bound(0.999999) == 9);
  CHECK(bek_bound(0.5, 3) == 6);
  for (auto D : arith::fundamental_values(500, arith::Sign::both)) {
    REQUIRE(count_zeros_sturm(QuadraticCharacter(D), -0.8, 0.8).count <= bek_bound(0.2));
  }
}

TEST_CASE("localized window and three-point centers") {
  const auto w = localized_window(100000, 0.04);
  CHECK(w.lo > 0.6);
  CHECK(w.lo < w.hi);
  CHECK(w.hi < 0.7);
  const auto c = three_point_centers(1e4, 0.05, 5000);
  REQUIRE(c.size() == 3);
  CHECK(c[0] < c[1]);
  CHECK(c[1] < 1);
}
