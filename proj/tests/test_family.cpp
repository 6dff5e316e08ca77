#include "doctest.h"

#include <cmath>
#include <vector>

#include "feketelab/arith.hpp"
#include "feketelab/errors.hpp"
#include "feketelab/family.hpp"
#include "feketelab/random_model.hpp"

using namespace feketelab;
using namespace feketelab::family;

TEST_CASE("small positive scan") {
  const auto recs = scan_family(20, arith::Sign::positive);
  REQUIRE(recs.size() == 5);
  const auto expect = arith::fundamental_values(20, arith::Sign::positive);
  for (std::size_t i = 0; i < recs.size(); ++i) CHECK(recs[i].D == expect[i]);
  const auto& r5 = recs[0];
  CHECK(r5.D == 5);
  CHECK(r5.n_zeros_grid == 0);
  // S(1..4) = 1, 0, -1, 0
  CHECK_FALSE(r5.all_partial_sums_nonneg);
  CHECK(r5.sign_changes_full == 1);
  REQUIRE(r5.log_l_at.size() == 2);
  CHECK(r5.log_l_at[0].first == 0.55);
  for (const auto& r : recs) CHECK(r.n_zeros_window <= r.n_zeros_grid);
  CHECK_THROWS_AS(scan_family(5, arith::Sign::positive), DomainError);
}

TEST_CASE("scan streams blocks in order and finds 173") {
  ScanConfig cfg;
  cfg.block = 7;
  std::vector<FamilyRecord> streamed;
  std::uint64_t last = 0;
  const auto n = scan_family(200, arith::Sign::both, cfg, [&](const FamilyRecord& r) { streamed.push_back(r); },
                             [&](std::uint64_t done, std::uint64_t) { last = done; });
  CHECK(n == streamed.size());
  CHECK(last == n);
  CHECK(streamed == scan_family(200, arith::Sign::both));
  bool saw173 = false;
  for (const auto& r : streamed) {
    if (r.D == 173) {
      saw173 = true;
      CHECK(r.n_zeros_grid == 2);
    }
    if (r.D > 0 && r.D < 173) CHECK(r.n_zeros_grid == 0);
  }
  CHECK(saw173);
}

TEST_CASE("summary") {
  std::vector<FamilyRecord> recs(4);
  recs[0].n_zeros_grid = 2;
  recs[1].all_partial_sums_nonneg = true;
  const auto s = summarize(recs, 1e5);
  CHECK(s.count == 4);
  CHECK(s.mean_zeros == 0.5);
  CHECK(s.fraction_no_zeros == 0.75);
  CHECK(s.fraction_nonneg == 0.25);
  CHECK(s.scale_log4 < 0);
  CHECK(s.scale_log3 > 0);
  CHECK(summarize(recs, 1e8).scale_log4 > 0);
  CHECK_THROWS_AS(summarize(recs, 10), DomainError);
}

TEST_CASE("orthogonality sums match an independent count") {
  const std::vector<std::uint64_t> ns{1, 2, 3, 4, 6, 9, 10, 25};
  const std::vector<std::int64_t> expect{607, -3, -2, 403, -8, 454, -8, 505};
  const auto rows = orthogonality_check(1000, ns);
  REQUIRE(rows.size() == ns.size());
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].sum == expect[i]);
  CHECK(rows[0].square);
  CHECK(rows[0].main_term == doctest::Approx(6000 / (M_PI * M_PI)));
  CHECK_FALSE(rows[1].square);
  CHECK(rows[1].bound_ratio > 0);
}

TEST_CASE("Jutila moments") {
  const std::vector<std::uint64_t> Ns{50, 1, 10, 10};
  const auto rep = jutila_check(1000, Ns);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.rows[0].N == 1);
  CHECK(rep.rows[0].moment == static_cast<double>(rep.family_size));
  CHECK(rep.rows[1].moment == 7024);
  CHECK(rep.rows[2].moment == 33361);
  CHECK(rep.family_size == 607);
}

TEST_CASE("box discrepancy") {
  const std::vector<Window> w{{0.75, 2, 50}, {0.75, 50, 500}};
  const auto a = model_vectors(w, 2000, 1);
  const auto b = model_vectors(w, 2000, 1);
  CHECK(box_discrepancy(a, b, 200) == 0.0);
  const auto c = model_vectors(w, 2000, 2);
  std::uint64_t tested = 0;
  const double d = box_discrepancy(a, c, 500, &tested);
  CHECK(tested >= 500);
  // two independent samples of size n differ by O(n^{-1/2}) on every box
  CHECK(d < 0.08);
  const auto rep = empirical_discrepancy(2000, w, 2000, 300, 3);
  CHECK(rep.full_box_difference == 0.0);
  CHECK(rep.family_correlation.size() == 1);
  CHECK(rep.sup_abs_difference >= 0);
  CHECK(rep.sup_abs_difference <= 1);
  CHECK_THROWS_AS(empirical_discrepancy(2000, w, 2000, 10, 3), DomainError);
}

TEST_CASE("mixed moments") {
  const std::vector<std::uint64_t> ladder{1000, 2000, 4000};
  const auto mm = mixed_moments(ladder);
  REQUIRE(mm.rows.size() == 3);
  CHECK(mm.target_S1 == doctest::Approx(1.725));
  for (const auto& r : mm.rows) {
    CHECK(r.S1 > 0);
    CHECK(r.cauchy_schwarz);
    CHECK(r.mean_f1 > 0);
  }
  CHECK(mm.slope_S2 > 0);
  CHECK_THROWS_AS(mixed_moments(ladder, 0.3), DomainError);
  const std::vector<std::uint64_t> small{500};
  CHECK_THROWS_AS(mixed_moments(small), DomainError);
}

TEST_CASE("three point filter is monotone in the threshold") {
  const auto lo = min_three_point_filter(2000, 0.01);
  const auto hi = min_three_point_filter(2000, 1.0);
  CHECK(lo.family_size == hi.family_size);
  CHECK(lo.passing >= hi.passing);
  CHECK(lo.passing <= lo.family_size);
}

TEST_CASE("truncation audit") {
  const auto a = truncation_audit(500, 0.75, 2, 1000, 1000, 0.5);
  CHECK(a.family_size == arith::fundamental_values(500, arith::Sign::both).size());
  CHECK(a.median_abs_diff <= a.q90_abs_diff);
  CHECK(a.fraction_above_g >= 0);
  CHECK(a.fraction_above_g <= 1);
}
