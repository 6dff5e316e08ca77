#include "feketelab/special.hpp"

#include <array>
#include <cmath>

#include <boost/math/special_functions/digamma.hpp>

#include "feketelab/errors.hpp"

namespace feketelab::special {

namespace {

// B_0 .. B_20
constexpr std::array<double, 21> kBernoulli = {
    1.0,           -0.5,  1.0 / 6, 0.0, -1.0 / 30, 0.0, 1.0 / 42,          0.0,
    -1.0 / 30,     0.0,   5.0 / 66, 0.0, -691.0 / 2730, 0.0, 7.0 / 6,      0.0,
    -3617.0 / 510, 0.0,   43867.0 / 798, 0.0, -174611.0 / 330};

constexpr int kShift = 20;      // terms summed before Euler-Maclaurin
constexpr int kCorrections = 9;  // B_2 .. B_18

// phi(x) = expm1(x)/x and its derivative
double phi(double x) {
  if (std::abs(x) < 0.5) {
    double term = 1, sum = 1;
    for (int k = 1; k < 25; ++k) {
      term *= x / (k + 1);
      sum += term;
    }
    return sum;
  }
  return std::expm1(x) / x;
}

double phi_prime(double x) {
  if (std::abs(x) < 0.5) {
    // sum_{k>=1} k x^{k-1}/(k+1)!
    double fact = 2, xp = 1, sum = 0;
    for (int k = 1; k < 25; ++k) {
      sum += k * xp / fact;
      xp *= x;
      fact *= (k + 2);
    }
    return sum;
  }
  return (x * std::exp(x) - std::expm1(x)) / (x * x);
}

void check_args(double s, double a) {
  if (!(s > 0)) throw DomainError("hurwitz: s must be positive");
  if (!(a > 0)) throw DomainError("hurwitz: a must be positive");
}

}  // namespace

double hurwitz_reg(double s, double a) {
  check_args(s, a);
  double sum = 0;
  for (int k = 0; k < kShift; ++k) sum += std::pow(k + a, -s);
  const double w = kShift + a;
  const double L = std::log(w);
  sum += -L * phi((1 - s) * L);
  sum += 0.5 * std::pow(w, -s);
  // B_{2j}/(2j)! * s(s+1)...(s+2j-2) * w^{-s-2j+1}
  double rising = s;  // s(s+1)...(s+2j-2) for j = 1
  double fact = 2;
  double wp = std::pow(w, -s - 1);
  for (int j = 1; j <= kCorrections; ++j) {
    sum += kBernoulli[2 * j] / fact * rising * wp;
    rising *= (s + 2 * j - 1) * (s + 2 * j);
    fact *= (2 * j + 1) * (2 * j + 2);
    wp /= w * w;
  }
  return sum;
}

double hurwitz_reg_ds(double s, double a) {
  check_args(s, a);
  double sum = 0;
  for (int k = 0; k < kShift; ++k) sum -= std::log(k + a) * std::pow(k + a, -s);
  const double w = kShift + a;
  const double L = std::log(w);
  sum += L * L * phi_prime((1 - s) * L);
  sum += -0.5 * L * std::pow(w, -s);
  double rising = s;
  double log_rising_ds = 1.0 / s;  // d/ds log of the rising product
  double fact = 2;
  double wp = std::pow(w, -s - 1);
  for (int j = 1; j <= kCorrections; ++j) {
    sum += kBernoulli[2 * j] / fact * rising * wp * (log_rising_ds - L);
    rising *= (s + 2 * j - 1) * (s + 2 * j);
    log_rising_ds += 1.0 / (s + 2 * j - 1) + 1.0 / (s + 2 * j);
    fact *= (2 * j + 1) * (2 * j + 2);
    wp /= w * w;
  }
  return sum;
}

double l_value(const character::QuadraticCharacter& chr, double s) {
  const auto q = chr.modulus();
  const double qd = static_cast<double>(q);
  double acc = 0;
  for (std::uint64_t r = 1; r < q; ++r) {
    const int c = chr(static_cast<std::int64_t>(r));
    if (c != 0) acc += c * hurwitz_reg(s, static_cast<double>(r) / qd);
  }
  return std::pow(qd, -s) * acc;
}

double l_derivative(const character::QuadraticCharacter& chr, double s) {
  const auto q = chr.modulus();
  const double qd = static_cast<double>(q);
  double acc = 0, acc_ds = 0;
  for (std::uint64_t r = 1; r < q; ++r) {
    const int c = chr(static_cast<std::int64_t>(r));
    if (c == 0) continue;
    const double a = static_cast<double>(r) / qd;
    acc += c * hurwitz_reg(s, a);
    acc_ds += c * hurwitz_reg_ds(s, a);
  }
  return std::pow(qd, -s) * (acc_ds - std::log(qd) * acc);
}

DirichletTail dirichlet_tail(const character::QuadraticCharacter& chr, double s, std::uint64_t periods) {
  const auto q = chr.modulus();
  const double qd = static_cast<double>(q);
  double acc = 0, acc_ds = 0;
  for (std::uint64_t r = 1; r <= q; ++r) {
    const int c = chr(static_cast<std::int64_t>(r));
    if (c == 0) continue;
    // n = k q + r with k >= periods, i.e. zeta(s, periods + r/q)
    const double a = static_cast<double>(periods) + static_cast<double>(r) / qd;
    acc += c * hurwitz_reg(s, a);
    acc_ds += c * hurwitz_reg_ds(s, a);
  }
  const double scale = std::pow(qd, -s);
  DirichletTail t;
  t.plain = scale * acc;
  t.log_weighted = scale * (std::log(qd) * acc - acc_ds);
  return t;
}

double digamma(double x) { return boost::math::digamma(x); }

double bernoulli_poly(int m, double x) {
  if (m < 0 || m > 20) throw DomainError("bernoulli_poly: order must lie in [0, 20]");
  double sum = 0;
  double binom = 1;
  for (int k = 0; k <= m; ++k) {
    sum += binom * kBernoulli[k] * std::pow(x, m - k);
    binom = binom * (m - k) / (k + 1);
  }
  return sum;
}

}  // namespace feketelab::special
