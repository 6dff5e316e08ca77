#pragma once

#include "feketelab/character.hpp"

namespace feketelab::special {

// Regularized Hurwitz zeta zeta(s, a) - 1/(s - 1) for real s > 0 and a > 0,
// continuous through s = 1 (where it equals -digamma(a)).
double hurwitz_reg(double s, double a);
// d/ds of hurwitz_reg.
double hurwitz_reg_ds(double s, double a);

// L(s, chi_D) and L'(s, chi_D) for real s > 0 through
// L(s) = |D|^{-s} sum_r chi(r) zeta(s, r/|D|).
double l_value(const character::QuadraticCharacter& chr, double s);
double l_derivative(const character::QuadraticCharacter& chr, double s);

// sum_{n > K|D|} chi(n) n^{-s} and sum_{n > K|D|} chi(n) n^{-s} log n.
struct DirichletTail {
  double plain = 0;
  double log_weighted = 0;
};
DirichletTail dirichlet_tail(const character::QuadraticCharacter& chr, double s, std::uint64_t periods);

double digamma(double x);

// Bernoulli polynomial B_m(x), 0 <= m <= 20.
double bernoulli_poly(int m, double x);

}  // namespace feketelab::special
