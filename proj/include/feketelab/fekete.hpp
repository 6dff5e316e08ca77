#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "feketelab/character.hpp"

namespace feketelab::fekete {

// F_D(z) = sum_{n=1}^{|D|-1} chi_D(n) z^n evaluated on [0, 1).

enum class EvalMethod { direct, truncated, poisson_dual };
std::string_view to_string(EvalMethod m);

struct FeketeEval {
  std::int64_t D = 0;
  double z = 0;
  double value = 0;
  EvalMethod method = EvalMethod::direct;
  double error_bound = 0;    // rigorous bound on |value - F_D(z)| (tail plus rounding)
  std::uint64_t n_terms = 0; // terms actually summed
};

FeketeEval eval_direct(const character::QuadraticCharacter& chr, double z);

// Sums n <= N* with z^(N*+1)/(1-z) <= tail_eps.
FeketeEval eval_truncated(const character::QuadraticCharacter& chr, double z, double tail_eps);

// F_D(exp(-T/D)) through the dual sum (2 sqrt(D)/T) sum_n chi(n)/(1 + 4 pi^2 n^2/T^2).
// D > 0 and 1 <= T <= D. The dual series is summed with second-order partial
// summation over whole periods, so `precision` bounds the dual tail; the
// error bound also includes the discarded wing e^{-T}/(1 - e^{-T/D}).
FeketeEval eval_poisson_dual(const character::QuadraticCharacter& chr, double T, double precision = 1e-12);

struct BatchValue {
  double value = 0;
  double error_bound = 0;
};
// Evaluate at many ascending points in one pass over the coefficients. Points
// whose remaining geometric tail drops below tail_abs stop early; the tail is
// folded into the error bound.
std::vector<BatchValue> eval_many(const character::QuadraticCharacter& chr, std::span<const double> zs,
                                  double tail_abs = 1e-22);

enum class ZeroMethod { grid_bisection, sturm_exact, jensen_upper, descartes };
std::string_view to_string(ZeroMethod m);

struct Bracket {
  double lo = 0;
  double hi = 0;
};

struct ZeroCountReport {
  double a = 0;
  double b = 0;
  ZeroMethod method = ZeroMethod::grid_bisection;
  // grid: lower bound on odd-order zeros; sturm: exact distinct roots;
  // jensen/descartes: upper bound.
  std::uint64_t count = 0;
  std::vector<Bracket> brackets;
  std::uint64_t grid_points = 0;
  std::string note;
};

// Grid uniform in u = -log(1 - z) on [a, b], sign changes between samples
// whose sign is certain, each bracket bisected to width refine_tol.
// Even-order (tangential) zeros are invisible to this method.
ZeroCountReport count_zeros_grid(const character::QuadraticCharacter& chr, double a, double b, std::uint64_t points,
                                 double refine_tol = 1e-12);

// Same on an explicit ascending grid in [0, 1).
ZeroCountReport count_zeros_on_grid(const character::QuadraticCharacter& chr, std::span<const double> zs,
                                    double refine_tol = 1e-12);

// points values of z on [a, b], uniform in -log(1 - z), endpoints included.
std::vector<double> log_gap_grid(double a, double b, std::uint64_t points);

inline constexpr std::uint64_t kDefaultSturmDegreeCap = 500;

// Exact count of distinct roots in (a, b). Throws CapabilityError when
// |D| exceeds degree_cap.
ZeroCountReport count_zeros_sturm(const character::QuadraticCharacter& chr, double a, double b,
                                  std::uint64_t degree_cap = kDefaultSturmDegreeCap);

// Upper bound on the zeros of F_D in the disc |z - z0| < r from Jensen's
// formula, with max_{|z-z0|=R} |F_D| <= sum_{n<|D|} (|z0| + R)^n.
std::uint64_t jensen_upper_bound(const character::QuadraticCharacter& chr, double z0, double r, double R,
                                 double f_z0);

struct JensenDisc {
  double z0 = 0;
  double r = 0;
  double R = 0;
  double f_z0 = 0;
  std::uint64_t bound = 0;
};

struct JensenCover {
  std::vector<JensenDisc> discs;
  std::uint64_t total_bound = 0;
};

// One Jensen disc per center, radii r = r_frac (1 - z0), R = R_frac (1 - z0).
JensenCover jensen_cover(const character::QuadraticCharacter& chr, std::span<const double> centers,
                         double r_frac = 0.25, double R_frac = 0.5);

// Centers exp(-x^{-1/4+eps}), exp(-x^{-1/2}), exp(-x^{1/4}/D).
std::vector<double> three_point_centers(double x, double eps, std::int64_t D);

// ceil(c / a): at most c/a zeros in (-1+a, 1-a) for an unspecified absolute
// constant c. A sanity comparator only.
std::uint64_t bek_bound(double a, double c = 8.0);

// Descartes' rule on F_D/(1-z) (D < 0) or F_D/(1-z)^2 (D > 0): the real roots
// of F_D pair up as z <-> 1/z, so N_D counted with multiplicity is at most
// half the number of coefficient sign variations.
std::uint64_t descartes_upper_bound(const character::QuadraticCharacter& chr);

// (1 - e^{-(log D)^{alpha/100}}, 1 - e^{-(log D)^alpha}).
Bracket localized_window(std::uint64_t modulus, double alpha);

}  // namespace feketelab::fekete
