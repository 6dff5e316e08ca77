#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace feketelab::arith {

// Sieves above this many bytes of working memory are refused.
inline constexpr std::uint64_t kDefaultSieveBudgetBytes = 1ull << 31;

class PrimeTable {
 public:
  // All primes <= limit. Uses a segmented odd-only sieve, so working memory is
  // O(sqrt(limit)) plus the output list; budget_bytes bounds the output list.
  explicit PrimeTable(std::uint64_t limit,
                      std::uint64_t budget_bytes = kDefaultSieveBudgetBytes);

  std::uint64_t limit() const { return limit_; }
  std::span<const std::uint64_t> primes() const { return primes_; }
  std::size_t size() const { return primes_.size(); }
  std::uint64_t operator[](std::size_t i) const { return primes_[i]; }

  // Number of primes <= n, for n <= limit().
  std::size_t count_upto(std::uint64_t n) const;
  // Index range [first, last) of primes p with lo < p < hi (both strict).
  std::pair<std::size_t, std::size_t> open_range(double lo, double hi) const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint64_t> primes_;
};

PrimeTable sieve_primes(std::uint64_t limit,
                        std::uint64_t budget_bytes = kDefaultSieveBudgetBytes);

// Deterministic Miller-Rabin for all 64-bit inputs.
bool is_prime(std::uint64_t n);

// Smallest-prime-factor table for 0..limit (spf[0] = spf[1] = 0).
class FactorTable {
 public:
  explicit FactorTable(std::uint32_t limit);
  std::uint32_t limit() const { return limit_; }
  std::uint32_t smallest_factor(std::uint32_t n) const { return spf_[n]; }
  // von Mangoldt: returns p if n = p^k (k >= 1), else 0.
  std::uint32_t prime_power_base(std::uint32_t n) const;

 private:
  std::uint32_t limit_;
  std::vector<std::uint32_t> spf_;
};

// Full Kronecker symbol (a/n) for all integers, with (a/0) = [|a| = 1],
// (a/-1) = sign(a) convention and (a/2) from a mod 8.
int kronecker(std::int64_t a, std::int64_t n);

// Legendre symbol (a/p) for an odd prime p via Euler's criterion.
int legendre_euler(std::int64_t a, std::uint64_t p);

bool is_squarefree(std::uint64_t n);

// D squarefree with D = 1 mod 4, or D = 4m with m squarefree, m = 2,3 mod 4.
// Throws DomainError for D = 0. Note is_fundamental(1) is true; enumeration
// below excludes the trivial discriminant.
bool is_fundamental(std::int64_t D);

enum class Sign { positive, negative, both };

struct Discriminant {
  std::int64_t value = 0;
  bool is_fundamental = false;
  friend bool operator==(const Discriminant&, const Discriminant&) = default;
};

// Fundamental discriminants 1 < |D| <= x of the requested sign, ascending.
std::vector<Discriminant> enumerate_fundamental(std::uint64_t x, Sign sign);

// Values only; same ordering as enumerate_fundamental.
std::vector<std::int64_t> fundamental_values(std::uint64_t x, Sign sign);

}  // namespace feketelab::arith
