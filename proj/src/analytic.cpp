#include "feketelab/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "feketelab/errors.hpp"
#include "feketelab/special.hpp"

namespace feketelab::analytic {

namespace {

constexpr double kPi = std::numbers::pi;

void check_s_smoothed(double s, double y) {
  if (!(s > 0.5 && s <= 1.0)) throw DomainError("smoothed sums: s must lie in (1/2, 1]");
  if (!(y >= 2)) throw DomainError("smoothed sums: y must be at least 2");
}

void check_window(double s, double u, double v) {
  if (!(s > 0.5 && s <= 1.0)) throw DomainError("dirichlet_window: s must lie in (1/2, 1]");
  if (!(u >= 2 && u < v)) throw DomainError("dirichlet_window: need 2 <= u < v");
}

void require_even(const QuadraticCharacter& chr, const char* who) {
  if (!chr.is_even()) throw DomainError(std::string(who) + ": requires D > 0");
}

struct QuadSum {
  double value = 0;
  double error = 0;
};

// Gauss-Kronrod on dyadic panels [a 2^k, a 2^{k+1}] covering [a, b].
template <typename F>
QuadSum integrate_dyadic(F f, double a, double b, double tol) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  QuadSum out;
  double lo = a;
  while (lo < b) {
    const double hi = std::min(2 * lo, b);
    double err = 0;
    out.value += GK::integrate(f, lo, hi, 15, tol, &err);
    out.error += err;
    lo = hi;
  }
  return out;
}

// G(t) = F_D(e^{-t}) / (1 - e^{-|D| t}) = sum_{n >= 1} chi(n) e^{-nt}.
double fekete_kernel(std::span<const std::int8_t> tab, double t) {
  const std::size_t q = tab.size();
  double num = 0;
  for (std::size_t r = 1; r < q; ++r) {
    if (tab[r] != 0) num += tab[r] * std::expm1(-static_cast<double>(r) * t);
  }
  return num / -std::expm1(-static_cast<double>(q) * t);
}

// Coefficients c_m, G(t) = sum_{m >= 1} c_m t^{m-1} near t = 0.
std::vector<double> kernel_series(std::span<const std::int8_t> tab, int terms) {
  const std::size_t q = tab.size();
  const double qd = static_cast<double>(q);
  std::vector<double> c(terms + 1, 0.0);
  double scale = 1;  // q^{m-1}/m!
  for (int m = 1; m <= terms; ++m) {
    scale *= (m == 1 ? 1.0 : qd) / m;
    double beta = 0;
    for (std::size_t r = 1; r < q; ++r) {
      if (tab[r] != 0) beta += tab[r] * special::bernoulli_poly(m, 1 - static_cast<double>(r) / qd);
    }
    c[m] = scale * beta;
  }
  return c;
}

struct Table {
  std::vector<std::int8_t> owned;
  std::span<const std::int8_t> view;
};

Table period_table(const QuadraticCharacter& chr) {
  Table t;
  if (chr.cached()) {
    t.view = chr.table();
  } else {
    t.owned.resize(chr.modulus());
    for (std::uint64_t n = 0; n < chr.modulus(); ++n) t.owned[n] = static_cast<std::int8_t>(chr(n));
    t.view = t.owned;
  }
  return t;
}

// int_0^inf t^{s-1} (log t)^{with_log} G(t) dt
QuadSum mellin_of_kernel(const QuadraticCharacter& chr, double s, bool with_log, double tol) {
  const auto tab = period_table(chr);
  const double q = static_cast<double>(chr.modulus());
  const double t0 = 0.5 / q;
  constexpr int kTerms = 20;
  const auto c = kernel_series(tab.view, kTerms);
  QuadSum out;
  const double log_t0 = std::log(t0);
  for (int m = 1; m <= kTerms; ++m) {
    const double a = s + m - 1;
    const double p = std::exp(a * log_t0);
    out.value += c[m] * (with_log ? p * (log_t0 / a - 1 / (a * a)) : p / a);
  }
  constexpr double kTop = 64;  // G(t) t^{s-1} < e^{-60} beyond
  auto f = [&](double t) {
    const double v = fekete_kernel(tab.view, t) * std::pow(t, s - 1);
    return with_log ? v * std::log(t) : v;
  };
  const auto body = integrate_dyadic(f, t0, kTop, tol);
  out.value += body.value;
  out.error = body.error;
  return out;
}

double relative(double lhs, double rhs) {
  const double d = std::abs(lhs - rhs);
  return std::abs(lhs) > 1e-12 ? d / std::abs(lhs) : d;
}

void check_quadrature(const QuadSum& q, double tol, const char* who) {
  if (!std::isfinite(q.value) || q.error > 1e3 * tol * std::max(1.0, std::abs(q.value))) {
    throw NumericalError(std::string(who) + ": quadrature did not converge (error estimate " +
                         std::to_string(q.error) + ")");
  }
}

// -e^{-st}(st + 1)/s^2 at t = log N
double laplace_antiderivative(double s, double N) {
  const double L = std::log(N);
  return -std::exp(-s * L) * (s * L + 1) / (s * s);
}

}  // namespace

std::string_view to_string(SmoothedKind k) {
  switch (k) {
    case SmoothedKind::log_l: return "log_l";
    case SmoothedKind::l_prime_over_l: return "l_prime_over_l";
    case SmoothedKind::dirichlet_window: return "dirichlet_window";
  }
  return "?";
}

std::uint64_t smoothing_cutoff(double y) {
  return static_cast<std::uint64_t>(std::ceil(y * (12 * std::log(10.0) + std::log(y))));
}

SmoothedKernel::SmoothedKernel(SmoothedKind kind, double s, double y) : kind_(kind), s_(s), y_(y) {
  if (kind == SmoothedKind::dirichlet_window) throw DomainError("SmoothedKernel: window sums have no kernel");
  check_s_smoothed(s, y);
  n_max_ = std::max<std::uint64_t>(2, smoothing_cutoff(y));
  const arith::PrimeTable primes(n_max_);
  for (std::uint64_t p : primes.primes()) {
    const double lp = std::log(static_cast<double>(p));
    std::uint64_t n = p;
    for (std::uint32_t k = 1;; ++k) {
      const double nd = static_cast<double>(n);
      const double base = std::exp(-s * std::log(nd) - nd / y);
      entries_.push_back({static_cast<std::uint32_t>(p), k, kind == SmoothedKind::log_l ? base / k : base * lp});
      if (n > n_max_ / p) break;
      n *= p;
    }
  }
}

double SmoothedKernel::evaluate(const QuadraticCharacter& chr) const {
  double sum = 0;
  std::uint32_t last_p = 0;
  int c = 0;
  for (const auto& e : entries_) {
    if (e.p != last_p) {
      c = chr(e.p);
      last_p = e.p;
    }
    if (c == 0) continue;
    sum += ((e.k & 1) ? c : 1) * e.w;
  }
  return kind_ == SmoothedKind::l_prime_over_l ? -sum : sum;
}

SmoothedLValue smoothed_l_prime_over_l(const QuadraticCharacter& chr, double s, double y) {
  const SmoothedKernel k(SmoothedKind::l_prime_over_l, s, y);
  return {chr.discriminant(), s, y, k.evaluate(chr), SmoothedKind::l_prime_over_l, 0, 0, k.n_max()};
}

SmoothedLValue smoothed_log_l(const QuadraticCharacter& chr, double s, double y) {
  const SmoothedKernel k(SmoothedKind::log_l, s, y);
  return {chr.discriminant(), s, y, k.evaluate(chr), SmoothedKind::log_l, 0, 0, k.n_max()};
}

SmoothedLValue dirichlet_window(const QuadraticCharacter& chr, double s, double u, double v,
                                const arith::PrimeTable& primes) {
  check_window(s, u, v);
  if (static_cast<double>(primes.limit()) < v - 1) throw DomainError("dirichlet_window: prime table too short");
  const auto [first, last] = primes.open_range(u, v);
  double sum = 0;
  for (std::size_t i = first; i < last; ++i) {
    const auto p = primes[i];
    const int c = chr(static_cast<std::int64_t>(p));
    if (c == 0) continue;
    const double lp = std::log(static_cast<double>(p));
    sum += c * lp * std::exp(-s * lp);
  }
  SmoothedLValue out{chr.discriminant(), s, 0, sum, SmoothedKind::dirichlet_window, u, v, 0};
  return out;
}

SmoothedLValue dirichlet_window(const QuadraticCharacter& chr, double s, double u, double v) {
  check_window(s, u, v);
  const arith::PrimeTable primes(static_cast<std::uint64_t>(std::ceil(v)));
  return dirichlet_window(chr, s, u, v, primes);
}

double dirichlet_polynomial(const QuadraticCharacter& chr, double s, double u, double v,
                            const arith::PrimeTable& primes) {
  return -dirichlet_window(chr, s, u, v, primes).value;
}

ThetaValue theta(const QuadraticCharacter& chr, double t, double eps) {
  require_even(chr, "theta");
  if (!(t > 0)) throw DomainError("theta: t must be positive");
  if (!(eps > 0)) throw DomainError("theta: eps must be positive");
  const double a = kPi * t / static_cast<double>(chr.modulus());
  const double need = std::log(1 / eps) + 5;
  const auto N = static_cast<std::uint64_t>(std::ceil(std::sqrt(need / a)));
  double sum = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    const int c = chr(static_cast<std::int64_t>(n));
    if (c != 0) sum += c * std::exp(-a * static_cast<double>(n) * static_cast<double>(n));
  }
  const double n1 = static_cast<double>(N + 1);
  ThetaValue out;
  out.D = chr.discriminant();
  out.t = t;
  out.value = sum;
  out.n_terms = N;
  out.tail_bound = std::exp(-a * n1 * n1) / -std::expm1(-a * (2 * n1 + 1));
  return out;
}

double theta_reflected(const QuadraticCharacter& chr, double t) {
  if (!(t > 0)) throw DomainError("theta: t must be positive");
  if (t >= 1) return theta(chr, t).value;
  return theta(chr, 1 / t).value / std::sqrt(t);
}

IdentityResult verify_dirichlet_identity(const QuadraticCharacter& chr, double s, double quad_tol) {
  if (!(s > 0)) throw DomainError("verify_dirichlet_identity: s must be positive");
  IdentityResult r;
  r.D = chr.discriminant();
  r.s = s;
  r.lhs = special::l_value(chr, s) * std::tgamma(s);
  const auto q = mellin_of_kernel(chr, s, false, quad_tol);
  check_quadrature(q, quad_tol, "verify_dirichlet_identity");
  r.rhs = q.value;
  r.quad_error = q.error;
  r.residual = relative(r.lhs, r.rhs);
  return r;
}

IdentityResult laplace_identity_check(const QuadraticCharacter& chr, double s, double /*quad_tol*/) {
  if (!(s > 0.5 && s <= 1.0)) throw DomainError("laplace_identity_check: s must lie in (1/2, 1]");
  IdentityResult r;
  r.D = chr.discriminant();
  r.s = s;
  const double L = special::l_value(chr, s);
  const double Lp = special::l_derivative(chr, s);
  r.lhs = (-Lp + L / s) / s;

  constexpr std::uint64_t kPeriods = 4;
  const std::uint64_t head_end = kPeriods * chr.modulus();
  double sum = 0, comp = 0;
  std::int64_t S = 0;
  double A_prev = laplace_antiderivative(s, 1.0);
  for (std::uint64_t N = 1; N < head_end; ++N) {
    S += chr(static_cast<std::int64_t>(N));
    const double A_next = laplace_antiderivative(s, static_cast<double>(N + 1));
    if (S != 0) {
      const double y = S * (A_next - A_prev) - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    A_prev = A_next;
  }
  const auto tail = special::dirichlet_tail(chr, s, kPeriods);
  r.rhs = sum + (s * tail.log_weighted + tail.plain) / (s * s);
  r.quad_error = 0;
  r.residual = relative(r.lhs, r.rhs);
  return r;
}

IdentityResult fekete_laplace_check(const QuadraticCharacter& chr, double s, double quad_tol) {
  require_even(chr, "fekete_laplace_check");
  if (!(s > 0.5 && s <= 1.0)) throw DomainError("fekete_laplace_check: s must lie in (1/2, 1]");
  IdentityResult r;
  r.D = chr.discriminant();
  r.s = s;
  const double L = special::l_value(chr, s);
  const double Lp = special::l_derivative(chr, s);
  r.lhs = std::tgamma(s) * (Lp + L * special::digamma(s));
  const auto q = mellin_of_kernel(chr, s, true, quad_tol);
  check_quadrature(q, quad_tol, "fekete_laplace_check");
  r.rhs = q.value;
  r.quad_error = q.error;
  r.residual = relative(r.lhs, r.rhs);
  return r;
}

IdentityResult mellin_theta_check(const QuadraticCharacter& chr, double s, double quad_tol) {
  require_even(chr, "mellin_theta_check");
  if (!(s > 0 && s <= 1.0)) throw DomainError("mellin_theta_check: s must lie in (0, 1]");
  IdentityResult r;
  r.D = chr.discriminant();
  r.s = s;
  const double L = special::l_value(chr, s);
  const double Lp = special::l_derivative(chr, s);
  r.lhs = std::tgamma(s / 2) * (Lp + 0.5 * L * special::digamma(s / 2));

  const double q = static_cast<double>(chr.modulus());
  // theta(tD/pi) = sum chi(n) e^{-n^2 t}; negligible below t_lo and above t_hi
  const double t_lo = kPi * kPi / (60 * q * q);
  constexpr double t_hi = 64;
  auto f = [&](double t) { return theta_reflected(chr, t * q / kPi) * std::pow(t, s / 2 - 1) * std::log(t); };
  const auto body = integrate_dyadic(f, t_lo, t_hi, quad_tol);
  check_quadrature(body, quad_tol, "mellin_theta_check");
  r.rhs_as_written = body.value;
  r.rhs = 0.5 * body.value;
  r.quad_error = 0.5 * body.error;
  r.residual = relative(r.lhs, r.rhs);
  r.residual_as_written = relative(r.lhs, r.rhs_as_written);
  return r;
}

double truncated_laplace(const QuadraticCharacter& chr, double s, double Y) {
  if (!(s > 0)) throw DomainError("truncated_laplace: s must be positive");
  if (!(Y >= 1)) throw DomainError("truncated_laplace: Y must be at least 1");
  const auto top = static_cast<std::uint64_t>(std::floor(Y));
  double sum = 0;
  std::int64_t S = 0;
  double A_prev = laplace_antiderivative(s, 1.0);
  for (std::uint64_t N = 1; N <= top; ++N) {
    S += chr(static_cast<std::int64_t>(N));
    const double right = N < top ? static_cast<double>(N + 1) : Y;
    const double A_next = laplace_antiderivative(s, right);
    sum += S * (A_next - A_prev);
    A_prev = A_next;
  }
  return sum;
}

double laplace_transform(std::span<const AffinePiece> g, double s) {
  if (!(s > 0)) throw DomainError("laplace_transform: s must be positive");
  double sum = 0;
  for (const auto& p : g) {
    const double h = p.t1 - p.t0;
    if (!(h > 0)) continue;
    const double beta = (p.g1 - p.g0) / h;
    const double one_minus = -std::expm1(-s * h);
    const double inner = (p.g0 / s + beta / (s * s)) * one_minus - (1 - one_minus) * beta * h / s;
    sum += std::exp(-s * p.t0) * inner;
  }
  return sum;
}

KarlinResult karlin_check(std::span<const AffinePiece> g, std::span<const double> s_grid) {
  if (g.empty()) throw DomainError("karlin_check: empty function");
  if (s_grid.empty()) throw DomainError("karlin_check: empty s grid");
  std::vector<double> values;
  values.reserve(2 * g.size());
  for (const auto& p : g) {
    values.push_back(p.g0);
    values.push_back(p.g1);
  }
  KarlinResult out;
  out.s_minus_g = character::sign_changes(values, character::SignVariant::deleted_zeros).count;
  out.laplace_values.reserve(s_grid.size());
  for (double s : s_grid) out.laplace_values.push_back(laplace_transform(g, s));
  out.s_plus_laplace = character::sign_changes(out.laplace_values, character::SignVariant::max_over_zeros).count;
  out.holds = out.s_minus_g >= out.s_plus_laplace;
  return out;
}

std::vector<AffinePiece> laplace_profile(const QuadraticCharacter& chr, double t_max) {
  if (!(t_max > 0)) throw DomainError("laplace_profile: t_max must be positive");
  std::vector<AffinePiece> out;
  std::int64_t S = 0;
  for (std::uint64_t N = 1;; ++N) {
    const double t0 = std::log(static_cast<double>(N));
    if (t0 >= t_max) break;
    S += chr(static_cast<std::int64_t>(N));
    const double t1 = std::min(std::log(static_cast<double>(N + 1)), t_max);
    out.push_back({t0, t1, S * t0, S * t1});
  }
  return out;
}

character::SignChangeReport theta_zero_scan(const QuadraticCharacter& chr, double t_lo, double t_hi,
                                            std::uint64_t points) {
  require_even(chr, "theta_zero_scan");
  if (!(t_lo > 0 && t_lo < t_hi)) throw DomainError("theta_zero_scan: need 0 < t_lo < t_hi");
  if (points < 2) throw DomainError("theta_zero_scan: need at least 2 points");
  const double la = std::log(t_lo), lb = std::log(t_hi);
  character::SignChangeReport rep;
  rep.variant = character::SignVariant::deleted_zeros;
  rep.range_lo = t_lo;
  rep.range_hi = t_hi;
  int last_sign = 0;
  double last_t = t_lo;
  for (std::uint64_t i = 0; i < points; ++i) {
    const double t = std::exp(la + (lb - la) * static_cast<double>(i) / static_cast<double>(points - 1));
    const double v = theta_reflected(chr, t);
    const int sg = v > 0 ? 1 : (v < 0 ? -1 : 0);
    if (sg == 0) continue;
    if (last_sign != 0 && sg != last_sign) {
      double lo = last_t, hi = t;
      for (int it = 0; it < 100 && hi - lo > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double vm = theta_reflected(chr, mid);
        if (vm == 0) {
          lo = hi = mid;
          break;
        }
        ((vm > 0 ? 1 : -1) == last_sign ? lo : hi) = mid;
      }
      rep.positions.push_back(0.5 * (lo + hi));
    }
    last_sign = sg;
    last_t = t;
  }
  rep.count = rep.positions.size();
  return rep;
}

}  // namespace feketelab::analytic
