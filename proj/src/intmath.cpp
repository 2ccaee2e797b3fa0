#include "dio/intmath.hpp"

#include <numeric>
#include <stdexcept>

namespace dio {

i64 checked_add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("checked_add: overflow");
  return r;
}

i64 checked_sub(i64 a, i64 b) {
  i64 r;
  if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("checked_sub: overflow");
  return r;
}

i64 checked_mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("checked_mul: overflow");
  return r;
}

i64 gcd_many(std::span<const i64> values) {
  if (values.empty()) throw std::invalid_argument("gcd_many: empty list");
  i64 g = 0;
  for (i64 v : values) g = std::gcd(g, v);
  return g;
}

Bezout ext_gcd(i64 x, i64 y) {
  if (x == 0 && y == 0) throw std::invalid_argument("ext_gcd: gcd(0, 0) undefined");
  // Iterative Euclid carrying both coefficient rows.
  i64 r0 = x, r1 = y;
  i64 u0 = 1, u1 = 0;
  i64 v0 = 0, v1 = 1;
  while (r1 != 0) {
    i64 q = r0 / r1;
    i64 r2 = r0 - q * r1;
    i64 u2 = u0 - q * u1;
    i64 v2 = v0 - q * v1;
    r0 = r1; r1 = r2;
    u0 = u1; u1 = u2;
    v0 = v1; v1 = v2;
  }
  if (r0 < 0) { r0 = -r0; u0 = -u0; v0 = -v0; }
  return {r0, u0, v0};
}

i64 mod_inverse(i64 x, i64 m) {
  if (m < 1) throw std::invalid_argument("mod_inverse: modulus must be positive");
  if (m == 1) return 1;  // least positive representative of the lone residue class
  i64 xr = ((x % m) + m) % m;
  Bezout b = ext_gcd(xr, m);
  if (b.g != 1) throw std::invalid_argument("mod_inverse: arguments not coprime");
  return ((b.u % m) + m) % m;  // in [1, m-1] because gcd(x, m) == 1
}

}  // namespace dio
