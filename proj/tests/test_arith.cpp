#include "doctest.h"

#include <cmath>
#include <numbers>
#include <numeric>

#include "feketelab/arith.hpp"
#include "feketelab/errors.hpp"

using namespace feketelab;
using namespace feketelab::arith;

namespace {

// Trial-division primality, independent of the sieve and of Miller-Rabin.
bool slow_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// (a/p) by enumerating the squares mod p.
int residue_symbol(std::int64_t a, std::int64_t p) {
  const std::int64_t r = ((a % p) + p) % p;
  if (r == 0) return 0;
  for (std::int64_t x = 1; x < p; ++x) {
    if (x * x % p == r) return 1;
  }
  return -1;
}

}  // namespace

TEST_CASE("sieve small cases") {
  const auto t10 = sieve_primes(10);
  REQUIRE(t10.size() == 4);
  CHECK(t10[0] == 2);
  CHECK(t10[3] == 7);
  const auto t2 = sieve_primes(2);
  REQUIRE(t2.size() == 1);
  CHECK(t2[0] == 2);
  CHECK_THROWS_AS(sieve_primes(1), DomainError);
}

TEST_CASE("sieve to 10^6 has 78498 primes, each prime") {
  const auto t = sieve_primes(1'000'000);
  CHECK(t.size() == 78498);
  for (std::size_t i = 0; i < t.size(); i += 97) CHECK(slow_prime(t[i]));
  for (std::size_t i = 1; i < t.size(); ++i) REQUIRE(t[i - 1] < t[i]);
  CHECK(t.count_upto(100) == 25);
  CHECK(t.count_upto(1000) == 168);
}

TEST_CASE("sieve agrees with trial division below 20000") {
  const auto t = sieve_primes(20000);
  std::size_t k = 0;
  for (std::uint64_t n = 0; n <= 20000; ++n) {
    if (slow_prime(n)) {
      REQUIRE(k < t.size());
      CHECK(t[k++] == n);
    }
  }
  CHECK(k == t.size());
}

TEST_CASE("open_range is strict at both ends") {
  const auto t = sieve_primes(100);
  const auto [a, b] = t.open_range(7, 29);
  CHECK(t[a] == 11);
  CHECK(t[b - 1] == 23);
}

TEST_CASE("sieve budget") {
  CHECK_THROWS_AS(sieve_primes(1'000'000, 64), ResourceError);
}

TEST_CASE("is_prime matches trial division and handles large inputs") {
  for (std::uint64_t n = 0; n < 5000; ++n) CHECK(is_prime(n) == slow_prime(n));
  CHECK(is_prime(18446744073709551557ull));
  CHECK_FALSE(is_prime(18446744073709551555ull));
  CHECK_FALSE(is_prime(3215031751ull));  // strong pseudoprime to bases 2, 3, 5, 7
}

TEST_CASE("kronecker examples") {
  CHECK(kronecker(5, 2) == -1);
  CHECK(kronecker(5, 1) == 1);
  CHECK(kronecker(12, 35) == 1);
  CHECK(kronecker(5, 5) == 0);
  CHECK(kronecker(-4, 3) == -1);
  CHECK(kronecker(-4, -1) == -1);
  CHECK(kronecker(5, -1) == 1);
  CHECK(kronecker(1, 0) == 1);
  CHECK(kronecker(3, 0) == 0);
  CHECK(kronecker(8, 2) == 0);
  CHECK(kronecker(-7, 2) == 1);
  CHECK(kronecker(-3, 2) == -1);
}

TEST_CASE("kronecker is completely multiplicative in n") {
  for (std::int64_t a = -60; a <= 60; ++a) {
    for (std::int64_t m = 1; m <= 40; ++m) {
      for (std::int64_t n = 1; n <= 40; ++n) {
        REQUIRE(kronecker(a, m * n) == kronecker(a, m) * kronecker(a, n));
      }
    }
  }
}

TEST_CASE("kronecker at odd primes matches residues and Euler's criterion") {
  for (std::int64_t p : {3, 5, 7, 11, 13, 101, 997}) {
    for (std::int64_t a = -150; a <= 150; ++a) {
      REQUIRE(kronecker(a, p) == residue_symbol(a, p));
      if (a % p != 0) REQUIRE(legendre_euler(a, static_cast<std::uint64_t>(p)) == residue_symbol(a, p));
    }
  }
}

TEST_CASE("kronecker vanishes exactly on common factors") {
  for (std::int64_t a = -50; a <= 50; ++a) {
    for (std::int64_t n = 1; n <= 100; ++n) {
      REQUIRE((kronecker(a, n) == 0) == (std::gcd(a, n) != 1));
    }
  }
}

TEST_CASE("is_fundamental examples") {
  CHECK(is_fundamental(5));
  CHECK(is_fundamental(12));
  CHECK_FALSE(is_fundamental(9));
  CHECK(is_fundamental(-4));
  CHECK(is_fundamental(-3));
  CHECK(is_fundamental(8));
  CHECK(is_fundamental(-8));
  CHECK_FALSE(is_fundamental(-1));
  CHECK_FALSE(is_fundamental(16));
  CHECK_FALSE(is_fundamental(7727));
  CHECK_THROWS_AS(is_fundamental(0), DomainError);
}

TEST_CASE("enumerate_fundamental examples") {
  CHECK(fundamental_values(20, Sign::positive) == std::vector<std::int64_t>{5, 8, 12, 13, 17});
  CHECK(fundamental_values(4, Sign::positive).empty());
  CHECK(fundamental_values(8, Sign::negative) == std::vector<std::int64_t>{-8, -7, -4, -3});
  const auto d = enumerate_fundamental(20, Sign::both);
  for (const auto& e : d) CHECK(e.is_fundamental);
}

TEST_CASE("enumeration equals the predicate filter") {
  const std::int64_t x = 3000;
  std::vector<std::int64_t> filtered;
  for (std::int64_t D = -x; D <= x; ++D) {
    if (D != 0 && D != 1 && is_fundamental(D)) filtered.push_back(D);
  }
  CHECK(fundamental_values(static_cast<std::uint64_t>(x), Sign::both) == filtered);
}

TEST_CASE("family sizes against an independent count") {
  // Brute-force counts from a separate factorization-based script.
  CHECK(fundamental_values(1000, Sign::both).size() == 607);
  CHECK(fundamental_values(1000, Sign::positive).size() == 302);
  CHECK(fundamental_values(10000, Sign::both).size() == 6086);
}

TEST_CASE("family density at 10^6") {
  const double density = static_cast<double>(fundamental_values(1'000'000, Sign::both).size()) / 1e6;
  CHECK(std::abs(density - 6 / (std::numbers::pi * std::numbers::pi)) < 0.005);
}

TEST_CASE("kronecker(D, .) has period |D| for fundamental D") {
  for (auto D : fundamental_values(500, Sign::both)) {
    const auto q = std::abs(D);
    for (std::int64_t n = 0; n <= 2 * q; ++n) REQUIRE(kronecker(D, n + q) == kronecker(D, n));
  }
}

TEST_CASE("factor table") {
  const FactorTable f(1000);
  CHECK(f.smallest_factor(1) == 0);
  CHECK(f.smallest_factor(91) == 7);
  CHECK(f.smallest_factor(997) == 997);
  CHECK(f.prime_power_base(81) == 3);
  CHECK(f.prime_power_base(12) == 0);
  CHECK(f.prime_power_base(1) == 0);
}
