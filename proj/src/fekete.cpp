#include "feketelab/fekete.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "feketelab/errors.hpp"
#include "feketelab/sturm.hpp"

namespace feketelab::fekete {

using character::QuadraticCharacter;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Powers z^n are recomputed with std::pow every kRefresh terms, which keeps
// their relative error below (kRefresh/2 + 1) eps; each block of kRefresh
// terms is summed plainly (another kRefresh/2 eps) and blocks are combined
// with Kahan summation.
constexpr std::uint64_t kRefresh = 512;
constexpr double kRoundingFactor = (kRefresh + 8) * kEps;

struct Kahan {
  double sum = 0;
  double comp = 0;
  void add(double x) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

// sum_{n=1}^{m} z^n
double geometric_mass(double z, std::uint64_t m) {
  if (z <= 0) return 0;
  if (z >= 1) return static_cast<double>(m);
  return z * (-std::expm1(static_cast<double>(m) * std::log(z))) / (1 - z);
}

int chi_small(const QuadraticCharacter& chr, std::uint64_t n) {
  const auto tab = chr.table();
  return tab.empty() ? chr(static_cast<std::int64_t>(n)) : tab[n];
}

// sum_{n=1}^{last} chi(n) z^n, last < |D|.
double accumulate(const QuadraticCharacter& chr, double z, std::uint64_t last) {
  Kahan acc;
  double block = 0;
  double pw = z;
  for (std::uint64_t n = 1; n <= last; ++n) {
    if (n % kRefresh == 0) {
      acc.add(block);
      block = 0;
      pw = std::pow(z, static_cast<double>(n));
    }
    const int c = chi_small(chr, n);
    if (c > 0) {
      block += pw;
    } else if (c < 0) {
      block -= pw;
    }
    pw *= z;
  }
  acc.add(block);
  return acc.sum;
}

std::vector<std::int8_t> period_table(const QuadraticCharacter& chr) {
  const auto tab = chr.table();
  if (!tab.empty()) return {tab.begin(), tab.end()};
  std::vector<std::int8_t> t(chr.modulus());
  for (std::uint64_t n = 0; n < chr.modulus(); ++n) t[n] = static_cast<std::int8_t>(chr(static_cast<std::int64_t>(n)));
  return t;
}

void check_z(double z, const char* who) {
  if (!(z >= 0.0 && z < 1.0)) throw DomainError(std::string(who) + ": z must lie in [0, 1)");
}

}  // namespace

std::string_view to_string(EvalMethod m) {
  switch (m) {
    case EvalMethod::direct: return "direct";
    case EvalMethod::truncated: return "truncated";
    case EvalMethod::poisson_dual: return "poisson_dual";
  }
  return "?";
}

std::string_view to_string(ZeroMethod m) {
  switch (m) {
    case ZeroMethod::grid_bisection: return "grid_bisection";
    case ZeroMethod::sturm_exact: return "sturm_exact";
    case ZeroMethod::jensen_upper: return "jensen_upper";
    case ZeroMethod::descartes: return "descartes";
  }
  return "?";
}

FeketeEval eval_direct(const QuadraticCharacter& chr, double z) {
  check_z(z, "eval_direct");
  FeketeEval e;
  e.D = chr.discriminant();
  e.z = z;
  e.method = EvalMethod::direct;
  e.n_terms = chr.modulus() - 1;
  e.value = accumulate(chr, z, e.n_terms);
  e.error_bound = geometric_mass(z, e.n_terms) * kRoundingFactor + 2 * kEps * std::abs(e.value);
  return e;
}

FeketeEval eval_truncated(const QuadraticCharacter& chr, double z, double tail_eps) {
  check_z(z, "eval_truncated");
  if (!(tail_eps > 0)) throw DomainError("eval_truncated: tail_eps must be positive");
  FeketeEval e;
  e.D = chr.discriminant();
  e.z = z;
  e.method = EvalMethod::truncated;
  const std::uint64_t full = chr.modulus() - 1;
  std::uint64_t n_star = 1;
  double tail = 0;
  if (z > 0) {
    // smallest N >= 1 with z^(N+1)/(1-z) <= tail_eps
    const double need = std::log(tail_eps * (1 - z)) / std::log(z);
    const double n_real = std::ceil(need) - 1.0;
    n_star = n_real < 1 ? 1 : (n_real >= static_cast<double>(full) ? full : static_cast<std::uint64_t>(n_real));
    while (n_star < full && std::pow(z, static_cast<double>(n_star + 1)) / (1 - z) > tail_eps) ++n_star;
    if (n_star < full) tail = std::pow(z, static_cast<double>(n_star + 1)) / (1 - z);
  }
  n_star = std::min(n_star, full);
  e.n_terms = n_star;
  e.value = accumulate(chr, z, n_star);
  e.error_bound = tail + geometric_mass(z, n_star) * kRoundingFactor + 2 * kEps * std::abs(e.value);
  return e;
}

FeketeEval eval_poisson_dual(const QuadraticCharacter& chr, double T, double precision) {
  const std::int64_t D = chr.discriminant();
  if (D < 0) throw DomainError("eval_poisson_dual: requires D > 0 (even character)");
  const double q = static_cast<double>(chr.modulus());
  if (!(T >= 1.0 && T <= q)) throw DomainError("eval_poisson_dual: T must lie in [1, D]");
  if (!(precision > 0)) throw DomainError("eval_poisson_dual: precision must be positive");
  const std::uint64_t period = chr.modulus();

  // Second partial sums S2 are periodic for an even primitive character.
  double b2 = 0;
  {
    std::int64_t s1 = 0, s2 = 0;
    for (std::uint64_t n = 1; n <= period; ++n) {
      s1 += n < period ? chi_small(chr, n) : 0;
      s2 += s1;
      b2 = std::max(b2, std::abs(static_cast<double>(s2)));
    }
  }
  const double c = 4 * std::numbers::pi * std::numbers::pi / (T * T);
  const double scale = 2 * std::sqrt(q) / T;
  auto w = [c](double n) { return 1.0 / (1.0 + c * n * n); };

  // |tail| <= scale * b2 * (w(N+1) - w(N+2)) once w is convex past N+1.
  const double n_convex = 1.0 / std::sqrt(3 * c) + 1.0;
  const double target = std::cbrt(4 * std::sqrt(q) * b2 / (T * c * precision));
  double n_min = std::max({q, n_convex, target});
  constexpr double kMaxTerms = 4e9;
  n_min = std::min(n_min, kMaxTerms);
  std::uint64_t periods = static_cast<std::uint64_t>(std::ceil(n_min / q));
  if (periods == 0) periods = 1;
  const std::uint64_t N = periods * period;
  const double Nd = static_cast<double>(N);

  const auto tab = period_table(chr);
  Kahan acc;
  for (std::uint64_t k = 0; k < periods; ++k) {
    const double base = static_cast<double>(k * period);
    double block = 0;
    for (std::uint64_t r = 1; r < period; ++r) {
      const int ch = tab[r];
      if (ch != 0) {
        const double n = base + static_cast<double>(r);
        block += ch / (1.0 + c * n * n);
      }
    }
    acc.add(block);
  }

  FeketeEval e;
  e.D = D;
  e.z = std::exp(-T / q);
  e.method = EvalMethod::poisson_dual;
  e.n_terms = N;
  e.value = scale * acc.sum;
  const double dual_tail = scale * b2 * (w(Nd + 1) - w(Nd + 2));
  const double wing = std::exp(-T) / (-std::expm1(-T / q));
  // sum_{n<=N} w(n) < 1 + pi/(2 sqrt c)
  const double mass = 1.0 + std::numbers::pi / (2 * std::sqrt(c));
  e.error_bound = dual_tail + wing + scale * mass * 8 * kEps + 4 * kEps * std::abs(e.value);
  return e;
}

std::vector<BatchValue> eval_many(const QuadraticCharacter& chr, std::span<const double> zs, double tail_abs) {
  const std::size_t P = zs.size();
  std::vector<BatchValue> out(P);
  if (P == 0) return out;
  for (std::size_t i = 0; i < P; ++i) {
    check_z(zs[i], "eval_many");
    if (i > 0 && zs[i] < zs[i - 1]) throw DomainError("eval_many: points must be ascending");
  }
  const std::uint64_t last = chr.modulus() - 1;
  std::vector<double> z(zs.begin(), zs.end());
  std::vector<double> pw(z), blk(P, 0.0), sum(P, 0.0), comp(P, 0.0), tail(P, 0.0);
  std::vector<std::uint64_t> terms(P, last);
  std::size_t lo = 0;
  // z = 0 contributes nothing
  while (lo < P && z[lo] == 0.0) {
    terms[lo] = 0;
    ++lo;
  }

  auto fold = [&](std::size_t from) {
    for (std::size_t i = from; i < P; ++i) {
      const double y = blk[i] - comp[i];
      const double t = sum[i] + y;
      comp[i] = (t - sum[i]) - y;
      sum[i] = t;
      blk[i] = 0;
    }
  };

  for (std::uint64_t n = 1; n <= last && lo < P; ++n) {
    if (n % kRefresh == 0) {
      fold(lo);
      const double nd = static_cast<double>(n);
      for (std::size_t i = lo; i < P; ++i) pw[i] = std::pow(z[i], nd);
      // retire points whose remaining tail sum_{m>=n} z^m is negligible
      while (lo < P && pw[lo] / (1 - z[lo]) < tail_abs) {
        tail[lo] = pw[lo] / (1 - z[lo]);
        terms[lo] = n - 1;
        ++lo;
      }
      if (lo == P) break;
    }
    const int c = chi_small(chr, n);
    double* __restrict b = blk.data();
    double* __restrict p = pw.data();
    const double* __restrict zz = z.data();
    if (c > 0) {
      for (std::size_t i = lo; i < P; ++i) {
        b[i] += p[i];
        p[i] *= zz[i];
      }
    } else if (c < 0) {
      for (std::size_t i = lo; i < P; ++i) {
        b[i] -= p[i];
        p[i] *= zz[i];
      }
    } else {
      for (std::size_t i = lo; i < P; ++i) p[i] *= zz[i];
    }
  }
  fold(0);
  for (std::size_t i = 0; i < P; ++i) {
    out[i].value = sum[i];
    out[i].error_bound =
        tail[i] + geometric_mass(z[i], terms[i]) * kRoundingFactor + 2 * kEps * std::abs(sum[i]);
  }
  return out;
}

namespace {

int certain_sign(const BatchValue& v) {
  if (v.value > v.error_bound) return 1;
  if (v.value < -v.error_bound) return -1;
  return 0;
}

int sign_at(const QuadraticCharacter& chr, double z) {
  const double pts[1] = {z};
  return certain_sign(eval_many(chr, pts).front());
}

}  // namespace

ZeroCountReport count_zeros_on_grid(const QuadraticCharacter& chr, std::span<const double> zs, double refine_tol) {
  if (zs.empty()) throw DomainError("count_zeros_on_grid: empty grid");
  if (!(refine_tol > 0)) throw DomainError("count_zeros_on_grid: refine_tol must be positive");
  ZeroCountReport rep;
  rep.a = zs.front();
  rep.b = zs.back();
  rep.method = ZeroMethod::grid_bisection;
  rep.grid_points = zs.size();
  rep.note = "lower bound: sign changes (odd-order zeros) between grid samples of certain sign";
  const auto vals = eval_many(chr, zs);
  int last_sign = 0;
  double last_z = zs.front();
  for (std::size_t i = 0; i < zs.size(); ++i) {
    const int s = certain_sign(vals[i]);
    if (s == 0) continue;
    if (last_sign != 0 && s != last_sign) {
      double lo = last_z, hi = zs[i];
      for (int it = 0; it < 200 && hi - lo > refine_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const int sm = sign_at(chr, mid);
        if (sm == 0) break;
        if (sm == last_sign) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      rep.brackets.push_back({lo, hi});
    }
    last_sign = s;
    last_z = zs[i];
  }
  rep.count = rep.brackets.size();
  return rep;
}

std::vector<double> log_gap_grid(double a, double b, std::uint64_t points) {
  if (!(a >= 0.0 && a <= b && b < 1.0)) throw DomainError("grid: need 0 <= a <= b < 1");
  if (points < 2) throw DomainError("grid: need at least 2 points");
  const double ua = -std::log1p(-a);
  const double ub = -std::log1p(-b);
  std::vector<double> zs(points);
  for (std::uint64_t i = 0; i < points; ++i) {
    const double u = ua + (ub - ua) * static_cast<double>(i) / static_cast<double>(points - 1);
    zs[i] = std::clamp(-std::expm1(-u), a, b);
  }
  zs.front() = a;
  zs.back() = b;
  for (std::uint64_t i = 1; i < points; ++i) zs[i] = std::max(zs[i], zs[i - 1]);
  return zs;
}

ZeroCountReport count_zeros_grid(const QuadraticCharacter& chr, double a, double b, std::uint64_t points,
                                 double refine_tol) {
  if (!(a >= 0.0 && a <= b && b < 1.0)) throw DomainError("count_zeros_grid: need 0 <= a <= b < 1");
  if (points < 2) throw DomainError("count_zeros_grid: need at least 2 grid points");
  if (!(refine_tol > 0)) throw DomainError("count_zeros_grid: refine_tol must be positive");
  if (a == b) {
    ZeroCountReport rep;
    rep.a = a;
    rep.b = b;
    rep.grid_points = points;
    rep.note = "empty interval";
    return rep;
  }
  const auto zs = log_gap_grid(a, b, points);
  return count_zeros_on_grid(chr, zs, refine_tol);
}

ZeroCountReport count_zeros_sturm(const QuadraticCharacter& chr, double a, double b, std::uint64_t degree_cap) {
  if (chr.modulus() > degree_cap) {
    throw CapabilityError("count_zeros_sturm: |D| = " + std::to_string(chr.modulus()) +
                          " exceeds the Sturm degree cap " + std::to_string(degree_cap) +
                          "; use the grid method instead");
  }
  std::vector<std::int64_t> coeffs(chr.modulus(), 0);
  for (std::uint64_t n = 1; n < chr.modulus(); ++n) coeffs[n] = chi_small(chr, n);
  ZeroCountReport rep;
  rep.a = a;
  rep.b = b;
  rep.method = ZeroMethod::sturm_exact;
  rep.count = sturm::count_roots(coeffs, a, b).roots;
  rep.note = "exact count of distinct real roots in the open interval";
  return rep;
}

std::uint64_t jensen_upper_bound(const QuadraticCharacter& chr, double z0, double r, double R, double f_z0) {
  if (!(r > 0 && r < R)) throw DomainError("jensen_upper_bound: need 0 < r < R");
  if (r / R > 0.999) throw DomainError("jensen_upper_bound: r/R > 0.999, log(R/r) too close to 0");
  if (!(f_z0 > 0)) throw DomainError("jensen_upper_bound: |F_D(z0)| must be positive");
  const double rho = std::abs(z0) + R;
  const double m = static_cast<double>(chr.modulus() - 1);
  double log_max;
  if (rho == 1.0) {
    log_max = std::log(m);
  } else if (rho < 1.0) {
    log_max = std::log(rho) + std::log1p(-std::pow(rho, m)) - std::log1p(-rho);
  } else {
    // rho (rho^m - 1)/(rho - 1) = rho^m * rho (1 - rho^{-m})/(rho - 1)
    log_max = m * std::log(rho) + std::log(rho) + std::log1p(-std::pow(rho, -m)) - std::log(rho - 1);
  }
  const double quotient = (log_max - std::log(f_z0)) / std::log(R / r);
  if (!(quotient > 0)) return 0;
  return static_cast<std::uint64_t>(std::ceil(quotient));
}

JensenCover jensen_cover(const QuadraticCharacter& chr, std::span<const double> centers, double r_frac,
                         double R_frac) {
  JensenCover cover;
  for (double z0 : centers) {
    JensenDisc d;
    d.z0 = z0;
    d.r = r_frac * (1 - z0);
    d.R = R_frac * (1 - z0);
    const auto e = eval_direct(chr, z0);
    d.f_z0 = std::abs(e.value);
    if (d.f_z0 <= e.error_bound) {
      d.bound = chr.modulus() - 1;  // Jensen unusable; fall back to the degree
    } else {
      d.bound = jensen_upper_bound(chr, z0, d.r, d.R, d.f_z0);
    }
    cover.total_bound += d.bound;
    cover.discs.push_back(d);
  }
  return cover;
}

std::vector<double> three_point_centers(double x, double eps, std::int64_t D) {
  const double ad = std::abs(static_cast<double>(D));
  return {std::exp(-std::pow(x, -0.25 + eps)), std::exp(-std::pow(x, -0.5)), std::exp(-std::pow(x, 0.25) / ad)};
}

std::uint64_t bek_bound(double a, double c) {
  if (!(a > 0 && a < 1)) throw DomainError("bek_bound: a must lie in (0, 1)");
  return static_cast<std::uint64_t>(std::ceil(c / a));
}

std::uint64_t descartes_upper_bound(const QuadraticCharacter& chr) {
  const std::uint64_t q = chr.modulus();
  std::int64_t s = 0, t = 0;
  int last = 0;
  std::uint64_t variations = 0;
  auto see = [&](std::int64_t v) {
    const int sg = v > 0 ? 1 : (v < 0 ? -1 : 0);
    if (sg == 0) return;
    if (last != 0 && sg != last) ++variations;
    last = sg;
  };
  for (std::uint64_t n = 1; n < q; ++n) {
    s += chi_small(chr, n);
    if (chr.is_even()) {
      t += s;
      see(t);
    } else {
      see(s);
    }
  }
  return variations / 2;
}

Bracket localized_window(std::uint64_t modulus, double alpha) {
  const double L = std::log(static_cast<double>(modulus));
  return {-std::expm1(-std::pow(L, alpha / 100.0)), -std::expm1(-std::pow(L, alpha))};
}

}  // namespace feketelab::fekete
