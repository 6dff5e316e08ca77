#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "feketelab/arith.hpp"
#include "feketelab/character.hpp"

namespace feketelab::analytic {

using character::QuadraticCharacter;

enum class SmoothedKind { log_l, l_prime_over_l, dirichlet_window };
std::string_view to_string(SmoothedKind k);

struct SmoothedLValue {
  std::int64_t D = 0;
  double s = 0;
  double y = 0;
  double value = 0;
  SmoothedKind kind = SmoothedKind::log_l;
  double u = 0;  // window, dirichlet_window only
  double v = 0;
  std::uint64_t n_max = 0;
};

// Cut-off y (12 ln 10 + ln y), where e^{-n/y} < 1e-12 / y.
std::uint64_t smoothing_cutoff(double y);

// Precomputed weights w(p^k) for the smoothed sums, so that many characters
// can be evaluated against one sieve. Weight is Lambda(n) n^{-s} e^{-n/y},
// divided by log n for log_l.
class SmoothedKernel {
 public:
  SmoothedKernel(SmoothedKind kind, double s, double y);
  SmoothedKind kind() const { return kind_; }
  double s() const { return s_; }
  double y() const { return y_; }
  std::uint64_t n_max() const { return n_max_; }
  // log_l: sum w chi(n); l_prime_over_l: -sum w chi(n) (an approximation of L'/L).
  double evaluate(const QuadraticCharacter& chr) const;

 private:
  struct Entry {
    std::uint32_t p;
    std::uint32_t k;
    double w;
  };
  SmoothedKind kind_;
  double s_, y_;
  std::uint64_t n_max_;
  std::vector<Entry> entries_;
};

// L'/L(s) ~ -sum Lambda(n) chi(n) n^{-s} e^{-n/y}; returns the right-hand side.
SmoothedLValue smoothed_l_prime_over_l(const QuadraticCharacter& chr, double s, double y);
// log L(s) ~ sum Lambda(n)/log n chi(n) n^{-s} e^{-n/y}.
SmoothedLValue smoothed_log_l(const QuadraticCharacter& chr, double s, double y);
// sum_{u < p < v} chi(p) log p / p^s over primes strictly inside the window.
SmoothedLValue dirichlet_window(const QuadraticCharacter& chr, double s, double u, double v);
SmoothedLValue dirichlet_window(const QuadraticCharacter& chr, double s, double u, double v,
                                const arith::PrimeTable& primes);
// Window surrogate for L'/L(s): minus the window sum.
double dirichlet_polynomial(const QuadraticCharacter& chr, double s, double u, double v,
                            const arith::PrimeTable& primes);

struct ThetaValue {
  std::int64_t D = 0;
  double t = 0;
  double value = 0;
  double tail_bound = 0;
  std::uint64_t n_terms = 0;
};

// theta(t) = sum_{n>=1} chi(n) e^{-pi n^2 t / D} for D > 0, summed directly.
ThetaValue theta(const QuadraticCharacter& chr, double t, double eps = 1e-17);
// Same value, through theta(t) = t^{-1/2} theta(1/t) when t < 1.
double theta_reflected(const QuadraticCharacter& chr, double t);

struct IdentityResult {
  std::int64_t D = 0;
  double s = 0;
  double lhs = 0;
  double rhs = 0;
  double residual = 0;    // |lhs - rhs| / |lhs|
  double quad_error = 0;  // estimated quadrature error in rhs
  // Mellin only: the right-hand side with a full log t weight.
  double rhs_as_written = std::numeric_limits<double>::quiet_NaN();
  double residual_as_written = std::numeric_limits<double>::quiet_NaN();
};

inline constexpr double kDefaultQuadTol = 1e-10;

// L(s)Gamma(s) = int_0^inf t^{s-1} F_D(e^{-t}) / (1 - e^{-|D|t}) dt, s > 0.
IdentityResult verify_dirichlet_identity(const QuadraticCharacter& chr, double s, double quad_tol = kDefaultQuadTol);
// (L(s)/s)(-L'/L(s) + 1/s) = int_0^inf t S(e^t) e^{-st} dt, 1/2 < s <= 1.
IdentityResult laplace_identity_check(const QuadraticCharacter& chr, double s, double quad_tol = kDefaultQuadTol);
// L Gamma (L'/L + Gamma'/Gamma) = int t^{s-1} log t F_D(e^{-t}) / (1 - e^{-|D|t}) dt, D > 0, 1/2 < s <= 1.
IdentityResult fekete_laplace_check(const QuadraticCharacter& chr, double s, double quad_tol = kDefaultQuadTol);
// Gamma(s/2) L (L'/L + psi(s/2)/2) against int theta(tD/pi) t^{s/2-1} (1/2) log t dt, D > 0, 0 < s <= 1.
// rhs_as_written carries the integral with weight log t.
IdentityResult mellin_theta_check(const QuadraticCharacter& chr, double s, double quad_tol = kDefaultQuadTol);

// int_0^{log Y} t S(e^t) e^{-st} dt, integrated exactly on each [log N, log(N+1)).
double truncated_laplace(const QuadraticCharacter& chr, double s, double Y);

// Piecewise-affine function: g(t) = g0 + (g1 - g0)(t - t0)/(t1 - t0) on [t0, t1).
struct AffinePiece {
  double t0 = 0, t1 = 0;
  double g0 = 0, g1 = 0;
};

// int g(t) e^{-st} dt over the pieces, in closed form.
double laplace_transform(std::span<const AffinePiece> g, double s);

struct KarlinResult {
  std::uint64_t s_minus_g = 0;
  std::uint64_t s_plus_laplace = 0;
  bool holds = false;
  std::vector<double> laplace_values;
};

KarlinResult karlin_check(std::span<const AffinePiece> g, std::span<const double> s_grid);

// g(t) = t S(e^t) on [0, t_max], affine on every [log N, log(N+1)).
std::vector<AffinePiece> laplace_profile(const QuadraticCharacter& chr, double t_max);

// Sign changes of theta on a log-uniform grid over [t_lo, t_hi]; positions
// are the bisected zero locations.
character::SignChangeReport theta_zero_scan(const QuadraticCharacter& chr, double t_lo, double t_hi,
                                            std::uint64_t points);

}  // namespace feketelab::analytic
