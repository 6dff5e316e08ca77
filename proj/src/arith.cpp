#include "feketelab/arith.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "feketelab/errors.hpp"

namespace feketelab::arith {

namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

// Jacobi symbol (a/n), n odd positive, 0 <= a.
int jacobi(std::uint64_t a, std::uint64_t n) {
  a %= n;
  int t = 1;
  while (a != 0) {
    const int v = std::countr_zero(a);
    a >>= v;
    if ((v & 1) && ((n & 7) == 3 || (n & 7) == 5)) t = -t;
    if ((a & 3) == 3 && (n & 3) == 3) t = -t;
    std::swap(a, n);
    a %= n;
  }
  return n == 1 ? t : 0;
}

}  // namespace

PrimeTable::PrimeTable(std::uint64_t limit, std::uint64_t budget_bytes) : limit_(limit) {
  if (limit < 2) throw DomainError("sieve_primes: limit must be >= 2");
  // 1.1 * limit/log(limit) entries is an upper bound on pi(limit) for limit >= 17.
  const double est = limit < 17 ? 8.0 : 1.26 * static_cast<double>(limit) / std::log(static_cast<double>(limit));
  if (est * sizeof(std::uint64_t) > static_cast<double>(budget_bytes)) {
    throw ResourceError("sieve_primes: limit " + std::to_string(limit) + " exceeds memory budget of " +
                        std::to_string(budget_bytes) + " bytes");
  }
  primes_.reserve(static_cast<std::size_t>(est));
  primes_.push_back(2);
  if (limit < 3) return;

  // Base primes up to sqrt(limit), simple sieve.
  const std::uint64_t root = isqrt(limit);
  std::vector<char> small(root + 1, 1);
  std::vector<std::uint64_t> base;
  for (std::uint64_t i = 3; i <= root; i += 2) {
    if (!small[i]) continue;
    base.push_back(i);
    for (std::uint64_t j = i * i; j <= root; j += 2 * i) small[j] = 0;
  }

  // Segments over odd numbers: index k represents lo + 2k.
  constexpr std::uint64_t kSegment = 1u << 18;
  std::vector<char> seg(kSegment);
  for (std::uint64_t lo = 3; lo <= limit; lo += 2 * kSegment) {
    const std::uint64_t hi = std::min(limit, lo + 2 * kSegment - 1);
    const std::uint64_t len = (hi - lo) / 2 + 1;
    std::fill(seg.begin(), seg.begin() + static_cast<std::ptrdiff_t>(len), 1);
    for (std::uint64_t p : base) {
      if (p * p > hi) break;
      std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
      if (start % 2 == 0) start += p;
      for (std::uint64_t j = start; j <= hi; j += 2 * p) seg[(j - lo) / 2] = 0;
    }
    for (std::uint64_t k = 0; k < len; ++k) {
      if (seg[k]) primes_.push_back(lo + 2 * k);
    }
  }
}

std::size_t PrimeTable::count_upto(std::uint64_t n) const {
  return static_cast<std::size_t>(std::upper_bound(primes_.begin(), primes_.end(), n) - primes_.begin());
}

std::pair<std::size_t, std::size_t> PrimeTable::open_range(double lo, double hi) const {
  auto first = std::upper_bound(primes_.begin(), primes_.end(), lo,
                                [](double v, std::uint64_t p) { return v < static_cast<double>(p); });
  auto last = std::lower_bound(primes_.begin(), primes_.end(), hi,
                               [](std::uint64_t p, double v) { return static_cast<double>(p) < v; });
  if (last < first) last = first;
  return {static_cast<std::size_t>(first - primes_.begin()), static_cast<std::size_t>(last - primes_.begin())};
}

PrimeTable sieve_primes(std::uint64_t limit, std::uint64_t budget_bytes) { return PrimeTable(limit, budget_bytes); }

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

FactorTable::FactorTable(std::uint32_t limit) : limit_(limit), spf_(static_cast<std::size_t>(limit) + 1, 0) {
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf_[i] != 0) continue;
    spf_[i] = static_cast<std::uint32_t>(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) {
      if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
    }
  }
}

std::uint32_t FactorTable::prime_power_base(std::uint32_t n) const {
  if (n < 2) return 0;
  const std::uint32_t p = spf_[n];
  while (n % p == 0) n /= p;
  return n == 1 ? p : 0;
}

int kronecker(std::int64_t a, std::int64_t n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int result = 1;
  std::uint64_t m;
  if (n < 0) {
    m = static_cast<std::uint64_t>(-(n + 1)) + 1;
    if (a < 0) result = -1;
  } else {
    m = static_cast<std::uint64_t>(n);
  }
  const int v = std::countr_zero(m);
  if (v > 0) {
    if ((a & 1) == 0) return 0;
    const std::int64_t a8 = ((a % 8) + 8) % 8;
    if ((v & 1) && (a8 == 3 || a8 == 5)) result = -result;
    m >>= v;
  }
  if (m == 1) return result;
  const std::int64_t sm = static_cast<std::int64_t>(m);
  const std::uint64_t ar = static_cast<std::uint64_t>(((a % sm) + sm) % sm);
  return result * jacobi(ar, m);
}

int legendre_euler(std::int64_t a, std::uint64_t p) {
  if (p < 3 || p % 2 == 0) throw DomainError("legendre_euler: p must be an odd prime");
  const std::int64_t sp = static_cast<std::int64_t>(p);
  const std::uint64_t ar = static_cast<std::uint64_t>(((a % sp) + sp) % sp);
  if (ar == 0) return 0;
  const std::uint64_t e = powmod(ar, (p - 1) / 2, p);
  return e == 1 ? 1 : -1;
}

bool is_squarefree(std::uint64_t n) {
  if (n == 0) return false;
  if (n % 4 == 0) return false;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % (d * d) == 0) return false;
  }
  return true;
}

bool is_fundamental(std::int64_t D) {
  if (D == 0) throw DomainError("is_fundamental: D must be nonzero");
  const std::int64_t r = ((D % 4) + 4) % 4;
  const std::uint64_t absd = D < 0 ? static_cast<std::uint64_t>(-D) : static_cast<std::uint64_t>(D);
  if (r == 1) return is_squarefree(absd);
  if (r != 0) return false;
  const std::int64_t m = D / 4;
  const std::int64_t mr = ((m % 4) + 4) % 4;
  if (mr != 2 && mr != 3) return false;
  return is_squarefree(absd / 4);
}

std::vector<std::int64_t> fundamental_values(std::uint64_t x, Sign sign) {
  if (x < 3) throw DomainError("enumerate_fundamental: x must be >= 3");
  // sqf[n] for 0 <= n <= x
  std::vector<char> sqf(x + 1, 1);
  sqf[0] = 0;
  for (std::uint64_t d = 2; d * d <= x; ++d) {
    for (std::uint64_t j = d * d; j <= x; j += d * d) sqf[j] = 0;
  }
  auto fundamental_abs = [&](std::uint64_t a, bool negative) {
    // D = +-a
    const std::uint64_t r = negative ? (4 - a % 4) % 4 : a % 4;
    if (r == 1) return sqf[a] != 0;
    if (r != 0) return false;
    const std::uint64_t m = a / 4;
    const std::uint64_t mr = negative ? (4 - m % 4) % 4 : m % 4;
    return (mr == 2 || mr == 3) && sqf[m] != 0;
  };
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(0.62 * static_cast<double>(x)) + 16);
  if (sign != Sign::positive) {
    for (std::uint64_t a = x; a >= 3; --a) {
      if (fundamental_abs(a, true)) out.push_back(-static_cast<std::int64_t>(a));
    }
  }
  if (sign != Sign::negative) {
    for (std::uint64_t a = 2; a <= x; ++a) {
      if (fundamental_abs(a, false)) out.push_back(static_cast<std::int64_t>(a));
    }
  }
  return out;
}

std::vector<Discriminant> enumerate_fundamental(std::uint64_t x, Sign sign) {
  std::vector<Discriminant> out;
  for (std::int64_t d : fundamental_values(x, sign)) out.push_back({d, true});
  return out;
}

}  // namespace feketelab::arith
