#include "doctest.h"

#include <cmath>

#include "feketelab/arith.hpp"
#include "feketelab/construct.hpp"
#include "feketelab/errors.hpp"

using namespace feketelab;
using namespace feketelab::construct;

TEST_CASE("697 = 17 * 41 is the first wide-mode pair for y = 3") {
  const auto s = find_positive_pairs(2500, 3, 0, true);
  REQUIRE_FALSE(s.pairs.empty());
  CHECK(s.pairs[0].D == 697);
  CHECK(s.pairs[0].q1 == 17);
  CHECK(s.pairs[0].q2 == 41);
  CHECK(s.pairs[0].residue_vector == std::vector<int>{-1});
  CHECK_FALSE(first_non_residue(697, 3).has_value());
  CHECK(first_non_residue(5, 3) == 2);
}

TEST_CASE("pair invariants") {
  for (double y : {3.0, 5.0, 7.0, 11.0}) {
    const auto s = find_positive_pairs(1e6, y);
    CHECK(s.q_lo == doctest::Approx(std::max(100.0, y)));
    CHECK(s.q_hi == doctest::Approx(1000.0));
    CHECK(s.pairs.size() == s.total_pairs);
    for (const auto& p : s.pairs) {
      REQUIRE(p.q1 % 8 == 1);
      REQUIRE(p.q2 % 8 == 1);
      REQUIRE(p.q1 < p.q2);
      REQUIRE(p.D == static_cast<std::int64_t>(p.q1 * p.q2));
      REQUIRE(p.D <= 1'000'000);
      REQUIRE(arith::is_fundamental(p.D));
      for (std::int64_t n = 1; n <= static_cast<std::int64_t>(y); ++n) REQUIRE(arith::kronecker(p.D, n) == 1);
    }
  }
  const auto limited = find_positive_pairs(1e6, 3, 10);
  CHECK(limited.pairs.size() == 10);
  CHECK(limited.total_pairs > 10);
}

TEST_CASE("pair counts at desk scale") {
  const auto paper = count_positive_pairs(1e6, 3, false, true);
  CHECK(paper.pairs == 256);
  CHECK(paper.lower_bound == doctest::Approx(pair_lower_bound(1e6, 3)));
  CHECK(paper.ratio < 1);
  CHECK(paper.all_qualifying == 37963);
  const auto wide = count_positive_pairs(1e6, 3, true);
  CHECK(wide.pairs == 344);
  CHECK(wide.ratio > 1);
  CHECK(count_positive_pairs(1e6, 5, false).pairs == 124);
  CHECK(count_positive_pairs(1e6, 5, true).pairs == 172);
  CHECK(pair_lower_bound(1e6, 3) == doctest::Approx(0.25e6 / (4 * std::pow(std::log(1e6), 2))));
}

TEST_CASE("Vinogradov-type bound") {
  CHECK(vinogradov_check(697, 3, 5) == doctest::Approx(0.6));
  CHECK_THROWS_AS(vinogradov_check(697, 3, 6), DomainError);
  CHECK_THROWS_AS(vinogradov_check(5, 3, 2), DomainError);
}

TEST_CASE("certificate for 697") {
  const auto c = certify_no_zeros(697, 3, 0.1);
  CHECK(c.certified);
  CHECK(c.grid.count == 0);
  CHECK(c.lower_ok);
  CHECK(c.lower_k == 3);
  CHECK(c.lower_margin == doctest::Approx(1 - 2 * std::pow(2.0 / 3, 3)));
  CHECK(c.z_hi == doctest::Approx(1 - std::pow(3.0, -kSqrtE + 0.1)));
  CHECK_FALSE(c.counterexample.has_value());
  CHECK_THROWS_AS(certify_no_zeros(5, 3, 0.1), DomainError);
}

TEST_CASE("large eps clips the upper interval") {
  const auto c = certify_no_zeros(697, 3, 1.7);
  CHECK(c.clipped);
  CHECK(c.kind == "clipped-empty");
}

TEST_CASE("every pair up to 1e6 with y <= 7 is certified and has no grid zero") {
  for (double y : {3.0, 5.0, 7.0}) {
    for (bool wide : {false, true}) {
      const auto s = find_positive_pairs(1e6, y, 0, wide);
      for (const auto& p : s.pairs) {
        const auto c = certify_no_zeros(p.D, y, 0.1);
        REQUIRE(c.certified);
        REQUIRE(c.grid.count == 0);
      }
    }
  }
}
