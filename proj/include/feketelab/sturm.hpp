#pragma once

#include <cstdint>
#include <span>

namespace feketelab::sturm {

struct SturmCount {
  std::uint64_t roots = 0;        // distinct real roots in the open interval
  std::size_t chain_length = 0;   // number of polynomials in the Sturm chain
};

// Number of distinct real roots of sum_k coeffs[k] x^k in the open interval
// (a, b), using a primitive pseudo-remainder Sturm chain over exact integers.
// Endpoints are converted to exact dyadic rationals. Roots at a or b are not
// counted: signs are taken at a+ and b- via the first nonvanishing derivative.
SturmCount count_roots(std::span<const std::int64_t> coeffs, double a, double b);

}  // namespace feketelab::sturm
