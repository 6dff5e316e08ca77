#include "feketelab/character.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace feketelab::character {

namespace {

// chi_D is the product of the characters of its prime discriminant factors:
// Legendre symbols (n/p) for odd p and one of chi_{-4}, chi_8, chi_{-8}.
std::vector<std::int8_t> period_table(std::int64_t D, std::uint64_t q) {
  std::vector<std::int8_t> table(q, 1);
  auto apply = [&](const std::vector<std::int8_t>& comp) {
    const std::size_t m = comp.size();
    std::size_t r = 0;
    for (std::uint64_t n = 0; n < q; ++n) {
      table[n] = static_cast<std::int8_t>(table[n] * comp[r]);
      if (++r == m) r = 0;
    }
  };
  std::uint64_t rest = q;
  int sign = 1;  // sign of the product of odd prime discriminants
  while (rest % 2 == 0) rest /= 2;
  std::uint64_t odd = rest;
  auto legendre_factor = [&](std::uint64_t p) {
    std::vector<std::int8_t> leg(p, -1);
    leg[0] = 0;
    std::uint64_t sq = 0;
    for (std::uint64_t a = 1; a <= (p - 1) / 2; ++a) {
      sq += 2 * a - 1;  // a^2 mod p
      if (sq >= p) sq %= p;
      leg[sq] = 1;
    }
    apply(leg);
    if (p % 4 == 3) sign = -sign;
  };
  for (std::uint64_t p = 3; p * p <= odd; p += 2) {
    if (odd % p) continue;
    odd /= p;
    legendre_factor(p);
  }
  if (odd > 1) legendre_factor(odd);
  const std::uint64_t two_part = q / rest;
  if (two_part == 4) {
    apply({0, 1, 0, -1});
  } else if (two_part == 8) {
    const int e_sign = (D > 0 ? 1 : -1) * sign;
    if (e_sign > 0) {
      apply({0, 1, 0, -1, 0, -1, 0, 1});
    } else {
      apply({0, 1, 0, 1, 0, -1, 0, -1});
    }
  }
  return table;
}

}  // namespace

QuadraticCharacter::QuadraticCharacter(std::int64_t D, std::uint64_t cache_threshold) : D_(D) {
  if (D == 0 || D == 1 || D == -1 || !arith::is_fundamental(D)) {
    throw DomainError("QuadraticCharacter: " + std::to_string(D) + " is not a nontrivial fundamental discriminant");
  }
  modulus_ = D < 0 ? static_cast<std::uint64_t>(-D) : static_cast<std::uint64_t>(D);
  if (modulus_ <= cache_threshold) table_ = period_table(D, modulus_);
}

std::vector<std::int64_t> partial_sums(const QuadraticCharacter& c, std::uint64_t n_max) {
  if (n_max < 1) throw DomainError("partial_sums: N_max must be >= 1");
  std::vector<std::int64_t> out(n_max);
  std::int64_t s = 0;
  const auto tab = c.table();
  const std::uint64_t q = c.modulus();
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    s += tab.empty() ? c(static_cast<std::int64_t>(n)) : tab[n % q];
    out[n - 1] = s;
  }
  return out;
}

std::vector<std::int64_t> legendre_trace(std::uint64_t p) {
  if (p < 3 || !arith::is_prime(p)) throw DomainError("legendre_trace: p must be an odd prime");
  std::vector<std::int64_t> out(p - 1);
  std::int64_t s = 0;
  for (std::uint64_t n = 1; n < p; ++n) {
    s += arith::legendre_euler(static_cast<std::int64_t>(n), p);
    out[n - 1] = s;
  }
  return out;
}

std::string_view to_string(SignVariant v) {
  return v == SignVariant::deleted_zeros ? "deleted_zeros" : "max_over_zeros";
}

namespace detail {

SignChangeReport sign_changes_signs(std::span<const signed char> s, SignVariant variant) {
  SignChangeReport r;
  r.variant = variant;
  if (variant == SignVariant::deleted_zeros) {
    signed char last = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == 0) continue;
      if (last != 0 && s[i] != last) {
        ++r.count;
        r.positions.push_back(static_cast<double>(i + 1));
      }
      last = s[i];
    }
    return r;
  }

  // best[k][b]: max changes in s[0..k] with element k assigned sign b (0:-, 1:+).
  constexpr long kNone = std::numeric_limits<long>::min() / 4;
  const std::size_t n = s.size();
  std::vector<std::array<long, 2>> best(n);
  std::vector<std::array<signed char, 2>> from(n, {-1, -1});
  auto allowed = [&](std::size_t k, int b) { return s[k] == 0 || (s[k] > 0) == (b == 1); };
  for (int b = 0; b < 2; ++b) best[0][b] = allowed(0, b) ? 0 : kNone;
  for (std::size_t k = 1; k < n; ++k) {
    for (int b = 0; b < 2; ++b) {
      best[k][b] = kNone;
      if (!allowed(k, b)) continue;
      const long stay = best[k - 1][b];
      const long flip = best[k - 1][1 - b] == kNone ? kNone : best[k - 1][1 - b] + 1;
      if (stay >= flip) {
        best[k][b] = stay;
        from[k][b] = static_cast<signed char>(b);
      } else {
        best[k][b] = flip;
        from[k][b] = static_cast<signed char>(1 - b);
      }
    }
  }
  int b = best[n - 1][1] >= best[n - 1][0] ? 1 : 0;
  r.count = static_cast<std::uint64_t>(best[n - 1][b]);
  for (std::size_t k = n - 1; k > 0; --k) {
    const int prev = from[k][b];
    if (prev != b) r.positions.push_back(static_cast<double>(k + 1));
    b = prev;
  }
  std::reverse(r.positions.begin(), r.positions.end());
  return r;
}

}  // namespace detail

Window partial_sum_window(std::uint64_t modulus, double alpha) {
  Window w;
  if (modulus < 3) return w;
  const double logd = std::log(static_cast<double>(modulus));
  const double lo = std::round(std::exp(std::pow(logd, alpha / 100.0)));
  const double hi = std::round(std::exp(std::pow(logd, alpha)));
  const double top = static_cast<double>(modulus - 1);
  w.lo = static_cast<std::uint64_t>(std::clamp(lo, 1.0, top));
  w.hi = static_cast<std::uint64_t>(std::clamp(hi, 1.0, top));
  w.degenerate = w.lo >= w.hi;
  return w;
}

SignChangeReport sign_changes_in_window(std::uint64_t modulus, std::span<const std::int64_t> sums, double alpha) {
  if (!(alpha > 0.0 && alpha < 0.05)) throw DomainError("sign_changes_in_window: alpha must lie in (0, 1/20)");
  const Window w = partial_sum_window(modulus, alpha);
  SignChangeReport r;
  r.range_lo = static_cast<double>(w.lo);
  r.range_hi = static_cast<double>(w.hi);
  if (w.degenerate) {
    r.degenerate = true;
    return r;
  }
  if (sums.size() < w.hi) throw DomainError("sign_changes_in_window: partial sums shorter than window");
  auto sub = sums.subspan(w.lo - 1, w.hi - w.lo + 1);
  auto inner = sign_changes(sub, SignVariant::deleted_zeros);
  r.count = inner.count;
  for (double p : inner.positions) r.positions.push_back(p + static_cast<double>(w.lo) - 1.0);
  return r;
}

SignChangeReport sign_changes_in_window(const QuadraticCharacter& c, double alpha) {
  const std::uint64_t q = c.modulus();
  if (q < 3) return sign_changes_in_window(q, {}, alpha);
  const auto sums = partial_sums(c, q - 1);
  return sign_changes_in_window(q, sums, alpha);
}

}  // namespace feketelab::character
