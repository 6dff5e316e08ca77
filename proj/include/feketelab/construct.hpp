#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "feketelab/fekete.hpp"

namespace feketelab::construct {

inline constexpr double kSqrtE = 1.6487212707001282;

// D = q1 q2 with q1 < q2 primes = 1 mod 8 and (p/q1) = (p/q2) for every odd
// prime p <= y, so chi_D(n) = 1 for all n <= y.
struct PositivePair {
  std::uint64_t q1 = 0;
  std::uint64_t q2 = 0;
  std::int64_t D = 0;
  double y = 0;
  std::vector<int> residue_vector;  // (p/q1) over odd primes p <= y, ascending
};

struct PairSearch {
  double x = 0;
  double y = 0;
  bool wide = false;
  // Prime window actually searched: lo < q < hi (wide mode: lo = y).
  double q_lo = 0;
  double q_hi = 0;
  std::uint64_t primes_in_window = 0;
  std::uint64_t buckets = 0;       // non-empty residue classes
  std::uint64_t total_pairs = 0;   // sum over buckets of C(|S|, 2)
  std::vector<PositivePair> pairs; // ascending D, at most limit_count
};

// Primes q = 1 mod 8 in (x^{1/3}, x^{1/2}) (wide: all q <= x^{1/2} with q > y),
// bucketed by residue vector and paired inside buckets. limit_count = 0 keeps
// every pair. Each returned D is checked directly against the Kronecker symbol.
PairSearch find_positive_pairs(double x, double y, std::uint64_t limit_count = 0, bool wide = false);

// (1/4) x / (2^{pi(y)} (log x)^2)
double pair_lower_bound(double x, double y);

struct PairCount {
  double x = 0;
  double y = 0;
  bool wide = false;
  std::uint64_t pairs = 0;
  double lower_bound = 0;
  double ratio = 0;
  // All fundamental 0 < D <= x with chi_D(n) = 1 for n <= y, by direct check.
  std::uint64_t all_qualifying = 0;
};

PairCount count_positive_pairs(double x, double y, bool wide, bool with_direct_count = false);

// Smallest n in [1, y] with chi_D(n) != 1, if any.
std::optional<std::int64_t> first_non_residue(std::int64_t D, double y);

// min_{1 <= t <= t_max} S(t)/t. Requires chi_D(n) = 1 for n <= y and
// t_max <= y^{sqrt(e) - eps/2}.
double vinogradov_check(std::int64_t D, double y, std::uint64_t t_max, double eps = 0.1);

struct NoZeroConfig {
  double A = 10.0;                   // k = floor(-A / log z) + 1 in the upper regime
  std::uint64_t grid_points = 4096;
  double margin = 1e-12;             // certificate inequalities must hold by this much
};

struct NoZeroCertificate {
  std::int64_t D = 0;
  double y = 0;
  double eps = 0;
  double z_hi = 0;         // 1 - y^{-sqrt(e) + eps}, clipped to [0, 1)
  bool clipped = false;

  fekete::ZeroCountReport grid;

  // z < 1 - 1/y: F_D(z) >= z (1 - 2 z^k) / (1 - z) with k = floor(y).
  std::uint64_t lower_k = 0;
  double lower_margin = 0;  // 1 - 2 (1 - 1/y)^k
  bool lower_ok = false;

  // 1 - 1/y <= z <= z_hi: partial summation with m = min_{n <= k} S(n)/n gives
  // F_D(z) >= z (m (1 - z^k) - z^k) / (1 - z), monotone in z.
  std::uint64_t upper_k = 0;
  double upper_A = 0;        // A actually used (smaller than configured if k is capped)
  double min_ratio = 0;
  double upper_margin = 0;   // m (1 - z_hi^k) - z_hi^k
  bool upper_ok = false;
  bool upper_empty = false;  // z_hi < 1 - 1/y
  bool adaptive_k = false;   // configured A failed; the best k over [1, |D|) was used

  bool certified = false;
  std::string kind;                     // "positivity", "positivity-best-k", "grid-only", "clipped-empty", "failed"
  std::optional<double> counterexample; // z where a bound failed or a sign change was found
};

// Throws DomainError naming the first n <= y with chi_D(n) != 1.
NoZeroCertificate certify_no_zeros(std::int64_t D, double y, double eps, const NoZeroConfig& cfg = {});

}  // namespace feketelab::construct
