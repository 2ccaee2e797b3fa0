#pragma once

#include <cstdint>
#include <span>

namespace dio {

using i64 = std::int64_t;
using u64 = std::uint64_t;

// Overflow-checked arithmetic.  All integer work in the scheme solver runs
// through these so that large rate shifts stay exact or fail loudly.
i64 checked_add(i64 a, i64 b);
i64 checked_sub(i64 a, i64 b);
i64 checked_mul(i64 a, i64 b);

// gcd of a nonempty list, zeros act as identity, result is nonnegative.
i64 gcd_many(std::span<const i64> values);

struct Bezout {
  i64 g;  // gcd(x, y) > 0
  i64 u;  // u*x + v*y == g
  i64 v;
};

// Extended Euclid returning the minimal-magnitude coefficient pair:
// |u| <= max(1, |y|/(2g)) and |v| <= max(1, |x|/(2g)).
Bezout ext_gcd(i64 x, i64 y);

// Least positive representative of x^{-1} mod m.  Requires m >= 1 and
// gcd(x, m) == 1.  For m == 1 every integer qualifies and 1 is returned.
i64 mod_inverse(i64 x, i64 m);

}  // namespace dio
