#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "feketelab/arith.hpp"
#include "feketelab/errors.hpp"

namespace feketelab::character {

// Period tables above this many entries are not cached; chi() falls back to
// the Kronecker symbol.
inline constexpr std::uint64_t kDefaultCacheThreshold = 10'000'000;

// chi_D(n) = (D/n) for a fundamental discriminant D with |D| > 1.
class QuadraticCharacter {
 public:
  explicit QuadraticCharacter(std::int64_t D, std::uint64_t cache_threshold = kDefaultCacheThreshold);

  std::int64_t discriminant() const { return D_; }
  std::uint64_t modulus() const { return modulus_; }
  bool is_even() const { return D_ > 0; }
  bool cached() const { return !table_.empty(); }

  int operator()(std::int64_t n) const {
    if (!table_.empty()) {
      const auto q = static_cast<std::int64_t>(modulus_);
      std::int64_t r = n % q;
      if (r < 0) {
        // chi(-1) = sign(D) for a real primitive character.
        return D_ > 0 ? table_[static_cast<std::size_t>(-r)] : -table_[static_cast<std::size_t>(-r)];
      }
      return table_[static_cast<std::size_t>(r)];
    }
    return arith::kronecker(D_, n);
  }

  // Cached period table chi(0..|D|-1); empty when not cached.
  std::span<const std::int8_t> table() const { return table_; }

 private:
  std::int64_t D_;
  std::uint64_t modulus_;
  std::vector<std::int8_t> table_;
};

inline int chi(const QuadraticCharacter& c, std::int64_t n) { return c(n); }

// S(N) = sum_{n <= N} chi(n) for N = 1..n_max (element i holds S(i+1)).
std::vector<std::int64_t> partial_sums(const QuadraticCharacter& c, std::uint64_t n_max);

// Partial sums of the Legendre symbol (n/p), N = 1..p-1, for an odd prime p.
// The prime need not be a fundamental discriminant.
std::vector<std::int64_t> legendre_trace(std::uint64_t p);

enum class SignVariant {
  deleted_zeros,   // S^-
  max_over_zeros,  // S^+
};

std::string_view to_string(SignVariant v);

struct SignChangeReport {
  std::uint64_t count = 0;
  SignVariant variant = SignVariant::deleted_zeros;
  // Index (1-based within range, or abscissa for sampled functions) of the
  // element that starts each new sign.
  std::vector<double> positions;
  double range_lo = 0;
  double range_hi = 0;
  bool degenerate = false;
};

namespace detail {
SignChangeReport sign_changes_signs(std::span<const signed char> signs, SignVariant variant);
}

// Sign changes of a real sequence. S^- drops zeros; S^+ is the maximum over
// all replacements of zeros by +-1, computed exactly by dynamic programming.
template <typename T>
  requires std::is_arithmetic_v<T>
SignChangeReport sign_changes(std::span<const T> values, SignVariant variant) {
  if (values.empty()) throw DomainError("sign_changes: empty sequence");
  std::vector<signed char> s(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) s[i] = values[i] > 0 ? 1 : (values[i] < 0 ? -1 : 0);
  auto r = detail::sign_changes_signs(s, variant);
  r.range_lo = 1;
  r.range_hi = static_cast<double>(values.size());
  return r;
}

template <typename T>
SignChangeReport sign_changes(const std::vector<T>& values, SignVariant variant) {
  return sign_changes(std::span<const T>(values), variant);
}

struct Window {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  bool degenerate = true;
};

// [round(exp((log|D|)^(alpha/100))), round(exp((log|D|)^alpha))] clipped to [1, |D|-1].
Window partial_sum_window(std::uint64_t modulus, double alpha);

// S^- of S(N) restricted to the window above. alpha must lie in (0, 1/20).
SignChangeReport sign_changes_in_window(const QuadraticCharacter& c, double alpha);
// Same, reusing precomputed partial sums S(1..|D|-1).
SignChangeReport sign_changes_in_window(std::uint64_t modulus, std::span<const std::int64_t> sums, double alpha);

}  // namespace feketelab::character
