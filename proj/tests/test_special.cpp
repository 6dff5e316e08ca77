#include "doctest.h"

#include <cmath>
#include <numbers>

#include "feketelab/character.hpp"
#include "feketelab/errors.hpp"
#include "feketelab/special.hpp"

using namespace feketelab;
using character::QuadraticCharacter;

namespace {

struct LCase {
  std::int64_t D;
  double s, value, derivative;
};

// 30-digit values: Hurwitz sums for L, numerical differentiation for L' at
// s < 1 and the Stieltjes-constant expansion for L'(1).
const LCase kLTable[] = {
    {5, 0.55, 0.25337421297458071, 0.42887066710502847},
    {5, 0.75, 0.33610563499806044, 0.39789921394748519},
    {5, 1.0, 0.43040894096400404, 0.3562406470307615},
    {-4, 0.55, 0.68153511693568287, 0.27191858774605791},
    {-4, 0.75, 0.73210721762739718, 0.23442419205418689},
    {-4, 1.0, 0.78539816339744831, 0.19290131679691243},
    {8, 0.55, 0.40382628016460667, 0.5902388755492324},
    {8, 0.75, 0.51230896250732622, 0.49627697084723447},
    {8, 1.0, 0.62322524014023051, 0.39395000150641813},
    {-3, 0.55, 0.49435419585741657, 0.26729206227117147},
    {-3, 0.75, 0.54583785963459051, 0.24748675375022562},
    {-3, 1.0, 0.60459978807807262, 0.22266298696860151},
    {13, 0.55, 0.46940794001509545, 0.57603018033999307},
    {13, 0.75, 0.5701025493860582, 0.43731528279878071},
    {13, 1.0, 0.66273539107184559, 0.31146679013624509},
    {-7, 0.55, 1.15424410391615, 0.14336685118271696},
    {-7, 0.75, 1.1759559887948543, 0.077043130743456962},
    {-7, 1.0, 1.1874104117237259, 0.018565981093028057},
    {12, 0.55, 0.53339136049258033, 0.67404787471415892},
    {12, 0.75, 0.65166937114979607, 0.51479779360355351},
    {12, 1.0, 0.76034599630094635, 0.36249491066055621},
    {21, 0.55, 0.52481098198773359, 0.52419217971109253},
    {21, 0.75, 0.61171079709750512, 0.35716739277385962},
    {21, 1.0, 0.68380724783096443, 0.2317918415117422},
};

}  // namespace

TEST_CASE("L and L' against high-precision values") {
  for (const auto& c : kLTable) {
    const QuadraticCharacter chr(c.D);
    CAPTURE(c.D);
    CAPTURE(c.s);
    CHECK(special::l_value(chr, c.s) == doctest::Approx(c.value).epsilon(1e-12));
    CHECK(special::l_derivative(chr, c.s) == doctest::Approx(c.derivative).epsilon(1e-10));
  }
}

TEST_CASE("closed forms at s = 1") {
  CHECK(special::l_value(QuadraticCharacter(-4), 1) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-14));
  const double phi = (1 + std::sqrt(5.0)) / 2;
  CHECK(special::l_value(QuadraticCharacter(5), 1) ==
        doctest::Approx(2 * std::log(phi) / std::sqrt(5.0)).epsilon(1e-14));
  // pi / sqrt(|D|) h(D) for D = -23, h = 3
  CHECK(special::l_value(QuadraticCharacter(-23), 1) ==
        doctest::Approx(3 * std::numbers::pi / std::sqrt(23.0)).epsilon(1e-13));
}

TEST_CASE("regularized Hurwitz zeta") {
  CHECK(special::hurwitz_reg(2, 1) == doctest::Approx(std::numbers::pi * std::numbers::pi / 6 - 1).epsilon(1e-14));
  CHECK(special::hurwitz_reg(1, 0.5) ==
        doctest::Approx(std::numbers::egamma + 2 * std::log(2.0)).epsilon(1e-14));
  CHECK(special::hurwitz_reg(0.5, 1) == doctest::Approx(-1.4603545088095868 + 2).epsilon(1e-13));
  // continuity through s = 1
  CHECK(special::hurwitz_reg(1 + 1e-7, 0.3) == doctest::Approx(special::hurwitz_reg(1, 0.3)).epsilon(1e-6));
  const double h = 1e-5;
  const double fd = (special::hurwitz_reg(0.7 + h, 0.4) - special::hurwitz_reg(0.7 - h, 0.4)) / (2 * h);
  CHECK(special::hurwitz_reg_ds(0.7, 0.4) == doctest::Approx(fd).epsilon(1e-7));
}

TEST_CASE("digamma and Bernoulli polynomials") {
  CHECK(special::digamma(1) == doctest::Approx(-std::numbers::egamma).epsilon(1e-15));
  CHECK(special::bernoulli_poly(2, 0.3) == doctest::Approx(0.09 - 0.3 + 1.0 / 6).epsilon(1e-15));
  CHECK(special::bernoulli_poly(0, 0.7) == 1.0);
  CHECK(special::bernoulli_poly(3, 0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(special::bernoulli_poly(21, 0.5), DomainError);
}

TEST_CASE("Dirichlet tail matches the series difference") {
  const QuadraticCharacter chr(13);
  const double s = 0.75;
  double partial = 0;
  for (int n = 1; n <= 13 * 4; ++n) partial += chr(n) * std::pow(n, -s);
  const auto tail = special::dirichlet_tail(chr, s, 4);
  CHECK(partial + tail.plain == doctest::Approx(special::l_value(chr, s)).epsilon(1e-12));
  double partial_log = 0;
  for (int n = 2; n <= 13 * 4; ++n) partial_log += chr(n) * std::log(n) * std::pow(n, -s);
  CHECK(-(partial_log + tail.log_weighted) == doctest::Approx(special::l_derivative(chr, s)).epsilon(1e-10));
}
