#include "feketelab/sturm.hpp"

#include <gmpxx.h>

#include <cmath>
#include <vector>

#include "feketelab/errors.hpp"

namespace feketelab::sturm {

namespace {

using Poly = std::vector<mpz_class>;  // ascending powers, no trailing zeros

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

void make_primitive(Poly& p) {
  if (p.empty()) return;
  mpz_class g = 0;
  for (const auto& c : p) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) return;
  }
  if (g > 1) {
    for (auto& c : p) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  }
}

Poly derivative(const Poly& p) {
  Poly d;
  if (p.size() <= 1) return d;
  d.resize(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = p[k] * static_cast<unsigned long>(k);
  trim(d);
  return d;
}

// Returns -c * rem(a, b) with c > 0, made primitive.
Poly negated_remainder(Poly r, const Poly& b) {
  const std::size_t db = b.size() - 1;
  const mpz_class& lcb = b.back();
  bool lc_negative = lcb < 0;
  int flips = 0;
  while (!r.empty() && r.size() - 1 >= db) {
    const std::size_t shift = r.size() - 1 - db;
    const mpz_class lcr = r.back();
    for (auto& c : r) c *= lcb;
    for (std::size_t k = 0; k <= db; ++k) r[k + shift] -= lcr * b[k];
    trim(r);
    if (lc_negative) flips ^= 1;
  }
  make_primitive(r);
  // r = lcb^e * rem; next Sturm element is -rem up to a positive factor.
  if (!flips) {
    for (auto& c : r) c = -c;
  }
  return r;
}

struct Dyadic {
  mpz_class num;
  unsigned long exp2 = 0;  // value = num / 2^exp2
};

Dyadic to_dyadic(double x) {
  if (!std::isfinite(x)) throw DomainError("sturm: interval endpoints must be finite");
  int e = 0;
  const double m = std::frexp(x, &e);  // x = m * 2^e, 0.5 <= |m| < 1
  // m * 2^53 is an exact integer.
  const double mi = std::ldexp(m, 53);
  Dyadic d;
  d.num = mpz_class(mi);
  long shift = 53 - e;
  if (shift <= 0) {
    mpz_mul_2exp(d.num.get_mpz_t(), d.num.get_mpz_t(), static_cast<unsigned long>(-shift));
    d.exp2 = 0;
  } else {
    d.exp2 = static_cast<unsigned long>(shift);
    // reduce common powers of two
    while (d.exp2 > 0 && mpz_even_p(d.num.get_mpz_t()) && d.num != 0) {
      mpz_fdiv_q_2exp(d.num.get_mpz_t(), d.num.get_mpz_t(), 1);
      --d.exp2;
    }
    if (d.num == 0) d.exp2 = 0;
  }
  return d;
}

// sign(p(x)) for dyadic x.
int sign_at(const Poly& p, const Dyadic& x) {
  if (p.empty()) return 0;
  const std::size_t n = p.size() - 1;
  mpz_class acc = p[n];
  mpz_class term;
  for (std::size_t k = n; k-- > 0;) {
    acc *= x.num;
    // + p[k] * 2^(exp2 * (n - k))
    mpz_mul_2exp(term.get_mpz_t(), p[k].get_mpz_t(), x.exp2 * (n - k));
    acc += term;
  }
  return sgn(acc);
}

// Sign of p just to the right (side=+1) or left (side=-1) of x.
int sign_near(const Poly& p, const Dyadic& x, int side) {
  Poly q = p;
  int parity = 1;
  while (!q.empty()) {
    const int s = sign_at(q, x);
    if (s != 0) return s * parity;
    q = derivative(q);
    parity *= side;
  }
  return 0;
}

std::size_t variations(const std::vector<Poly>& chain, const Dyadic& x, int side) {
  std::size_t v = 0;
  int last = 0;
  for (const auto& p : chain) {
    const int s = sign_near(p, x, side);
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

}  // namespace

SturmCount count_roots(std::span<const std::int64_t> coeffs, double a, double b) {
  SturmCount out;
  if (!(a < b)) return out;
  Poly p(coeffs.size());
  for (std::size_t k = 0; k < coeffs.size(); ++k) p[k] = mpz_class(static_cast<long>(coeffs[k]));
  trim(p);
  if (p.empty()) throw DomainError("sturm: zero polynomial has infinitely many roots");
  if (p.size() == 1) return out;

  std::vector<Poly> chain;
  make_primitive(p);
  chain.push_back(p);
  Poly d = derivative(p);
  make_primitive(d);
  chain.push_back(d);
  while (chain.back().size() > 1) {
    Poly r = negated_remainder(chain[chain.size() - 2], chain.back());
    if (r.empty()) break;
    chain.push_back(std::move(r));
  }
  out.chain_length = chain.size();
  const Dyadic da = to_dyadic(a);
  const Dyadic db = to_dyadic(b);
  const std::size_t va = variations(chain, da, +1);
  const std::size_t vb = variations(chain, db, -1);
  out.roots = va >= vb ? va - vb : 0;
  return out;
}

}  // namespace feketelab::sturm
