#include "feketelab/construct.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "feketelab/arith.hpp"
#include "feketelab/character.hpp"
#include "feketelab/errors.hpp"

namespace feketelab::construct {

namespace {

void check_xy(double x, double y) {
  if (!(y >= 2)) throw DomainError("positivity horizon y must be >= 2");
  if (!(x >= 100)) throw DomainError("x must be >= 100");
  if (x > 1e16) throw DomainError("x above 1e16 is out of range");
}

std::vector<std::uint64_t> odd_primes_upto(double y) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 3; static_cast<double>(p) <= y; p += 2) {
    if (arith::is_prime(p)) out.push_back(p);
  }
  return out;
}

struct Buckets {
  double q_lo = 0;
  double q_hi = 0;
  std::uint64_t primes = 0;
  std::map<std::vector<int>, std::vector<std::uint64_t>> by_vector;
};

Buckets bucket_primes(double x, double y, bool wide) {
  Buckets b;
  b.q_hi = std::sqrt(x);
  b.q_lo = wide ? y : std::max(std::cbrt(x), y);
  const auto odd = odd_primes_upto(y);
  const auto table = arith::sieve_primes(static_cast<std::uint64_t>(std::ceil(b.q_hi)));
  const auto [first, last] = table.open_range(b.q_lo, b.q_hi);
  for (auto i = first; i < last; ++i) {
    const auto q = table[i];
    if (q % 8 != 1) continue;
    std::vector<int> v;
    v.reserve(odd.size());
    for (auto p : odd) v.push_back(arith::legendre_euler(static_cast<std::int64_t>(p), q));
    b.by_vector[v].push_back(q);
    ++b.primes;
  }
  return b;
}

}  // namespace

double pair_lower_bound(double x, double y) {
  check_xy(x, y);
  const auto pi_y = static_cast<double>(odd_primes_upto(y).size() + 1);
  const double lx = std::log(x);
  return 0.25 * x / (std::exp2(pi_y) * lx * lx);
}

std::optional<std::int64_t> first_non_residue(std::int64_t D, double y) {
  for (std::int64_t n = 1; static_cast<double>(n) <= y; ++n) {
    if (arith::kronecker(D, n) != 1) return n;
  }
  return std::nullopt;
}

PairSearch find_positive_pairs(double x, double y, std::uint64_t limit_count, bool wide) {
  check_xy(x, y);
  const auto b = bucket_primes(x, y, wide);
  PairSearch out;
  out.x = x;
  out.y = y;
  out.wide = wide;
  out.q_lo = b.q_lo;
  out.q_hi = b.q_hi;
  out.primes_in_window = b.primes;
  out.buckets = b.by_vector.size();
  for (const auto& [v, qs] : b.by_vector) {
    out.total_pairs += qs.size() * (qs.size() - 1) / 2;
    for (std::size_t i = 0; i < qs.size(); ++i) {
      for (std::size_t j = i + 1; j < qs.size(); ++j) {
        PositivePair pp{qs[i], qs[j], static_cast<std::int64_t>(qs[i] * qs[j]), y, v};
        if (first_non_residue(pp.D, y) || !arith::is_fundamental(pp.D)) {
          throw std::logic_error("pair " + std::to_string(pp.D) + " fails the direct positivity check");
        }
        out.pairs.push_back(std::move(pp));
      }
    }
  }
  std::sort(out.pairs.begin(), out.pairs.end(), [](const auto& a, const auto& b) { return a.D < b.D; });
  if (limit_count > 0 && out.pairs.size() > limit_count) out.pairs.resize(limit_count);
  return out;
}

PairCount count_positive_pairs(double x, double y, bool wide, bool with_direct_count) {
  check_xy(x, y);
  PairCount c;
  c.x = x;
  c.y = y;
  c.wide = wide;
  const auto b = bucket_primes(x, y, wide);
  for (const auto& [v, qs] : b.by_vector) c.pairs += qs.size() * (qs.size() - 1) / 2;
  c.lower_bound = pair_lower_bound(x, y);
  c.ratio = static_cast<double>(c.pairs) / c.lower_bound;
  if (with_direct_count) {
    for (auto D : arith::fundamental_values(static_cast<std::uint64_t>(x), arith::Sign::positive)) {
      if (!first_non_residue(D, y)) ++c.all_qualifying;
    }
  }
  return c;
}

double vinogradov_check(std::int64_t D, double y, std::uint64_t t_max, double eps) {
  if (!(y >= 1)) throw DomainError("vinogradov_check: y must be >= 1");
  if (auto n = first_non_residue(D, y)) {
    throw DomainError("vinogradov_check: chi_" + std::to_string(D) + "(" + std::to_string(*n) + ") = " +
                      std::to_string(arith::kronecker(D, *n)) + ", not 1");
  }
  const double horizon = std::pow(y, kSqrtE - eps / 2);
  if (t_max < 1 || static_cast<double>(t_max) > horizon) {
    throw DomainError("vinogradov_check: t_max must lie in [1, y^(sqrt(e) - eps/2)] = [1, " +
                      std::to_string(horizon) + "]");
  }
  std::int64_t s = 0;
  double best = 1;
  for (std::uint64_t t = 1; t <= t_max; ++t) {
    s += arith::kronecker(D, static_cast<std::int64_t>(t));
    best = std::min(best, static_cast<double>(s) / static_cast<double>(t));
  }
  return best;
}

NoZeroCertificate certify_no_zeros(std::int64_t D, double y, double eps, const NoZeroConfig& cfg) {
  if (!(y >= 2)) throw DomainError("certify_no_zeros: y must be >= 2");
  if (!(D > 1) || !arith::is_fundamental(D)) {
    throw DomainError("certify_no_zeros: D must be a positive fundamental discriminant");
  }
  if (auto n = first_non_residue(D, y)) {
    throw DomainError("certify_no_zeros: certificate inapplicable, chi_" + std::to_string(D) + "(" +
                      std::to_string(*n) + ") != 1");
  }
  NoZeroCertificate c;
  c.D = D;
  c.y = y;
  c.eps = eps;
  const double gap = std::pow(y, -kSqrtE + eps);
  c.z_hi = 1 - gap;
  if (!(c.z_hi > 0)) {
    c.z_hi = 0;
    c.clipped = true;
    c.certified = true;
    c.kind = "clipped-empty";
    c.grid.method = fekete::ZeroMethod::grid_bisection;
    c.grid.note = "empty interval";
    return c;
  }

  const character::QuadraticCharacter chr(D);
  const auto q = chr.modulus();
  c.grid = fekete::count_zeros_grid(chr, 0, c.z_hi, cfg.grid_points);
  if (c.grid.count > 0) {
    c.kind = "failed";
    c.counterexample = 0.5 * (c.grid.brackets.front().lo + c.grid.brackets.front().hi);
    return c;
  }

  // Lower regime.
  c.lower_k = std::min<std::uint64_t>(static_cast<std::uint64_t>(std::floor(y)), q - 1);
  const double z_split = std::min(1 - 1 / y, c.z_hi);
  c.lower_margin = 1 - 2 * std::pow(z_split, static_cast<double>(c.lower_k));
  c.lower_ok = c.lower_margin > cfg.margin;

  // Upper regime: one k chosen at z_hi certifies every smaller z.
  c.upper_empty = c.z_hi < 1 - 1 / y;
  if (c.upper_empty) {
    c.upper_ok = true;
  } else {
    const double lz = std::log(c.z_hi);
    auto k = static_cast<std::uint64_t>(std::floor(-cfg.A / lz)) + 1;
    k = std::min<std::uint64_t>(k, q - 1);
    c.upper_k = k;
    c.upper_A = -static_cast<double>(k) * lz;
    // margin(k) = m_k (1 - z^k) - z^k, with no tail to dominate at k = |D| - 1.
    std::vector<double> ratio(q);
    std::int64_t s = 0;
    double m = 1;
    for (std::uint64_t n = 1; n < q; ++n) {
      s += chr(static_cast<std::int64_t>(n));
      m = std::min(m, static_cast<double>(s) / static_cast<double>(n));
      ratio[n] = m;
    }
    auto margin = [&](std::uint64_t kk) {
      const double zk = std::pow(c.z_hi, static_cast<double>(kk));
      return ratio[kk] * (1 - zk) - (kk == q - 1 ? 0.0 : zk);
    };
    c.min_ratio = ratio[k];
    c.upper_margin = margin(k);
    c.upper_ok = c.upper_margin > cfg.margin;
    if (!c.upper_ok) {
      // The configured A is too large for this D; any other k is equally valid.
      for (std::uint64_t kk = 1; kk < q; ++kk) {
        const double mk = margin(kk);
        if (mk > c.upper_margin) {
          c.upper_margin = mk;
          c.upper_k = kk;
        }
      }
      c.min_ratio = ratio[c.upper_k];
      c.upper_A = -static_cast<double>(c.upper_k) * lz;
      c.upper_ok = c.upper_margin > cfg.margin;
      c.adaptive_k = c.upper_ok;
    }
  }

  c.certified = c.lower_ok && c.upper_ok;
  if (c.certified) {
    c.kind = c.adaptive_k ? "positivity-best-k" : "positivity";
  } else {
    c.kind = "grid-only";
    c.counterexample = c.lower_ok ? c.z_hi : z_split;
  }
  return c;
}

}  // namespace feketelab::construct
