#pragma once

// Small integer helpers shared by the modular and cyclotomic code.

#include <cstdint>
#include <numeric>
#include <tuple>
#include <utility>
#include <vector>

#include "classinv/error.hpp"

namespace classinv {

using i64 = std::int64_t;

/// Least non-negative residue.
inline i64 mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

/// Representative in (-m/2, m/2].
inline i64 balanced_mod(i64 a, i64 m) {
  i64 r = mod(a, m);
  return (2 * r > m) ? r - m : r;
}

/// Returns (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0.
inline std::tuple<i64, i64, i64> ext_gcd(i64 a, i64 b) {
  i64 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    i64 q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

inline i64 inv_mod(i64 a, i64 m) {
  auto [g, x, y] = ext_gcd(mod(a, m), m);
  (void)y;
  require(g == 1, "inv_mod: not a unit");
  return mod(x, m);
}

inline bool is_unit(i64 a, i64 m) { return std::gcd(mod(a, m), m) == 1; }

inline bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

/// Prime factorization as (p, e) pairs in increasing p.
inline std::vector<std::pair<i64, int>> factor(i64 n) {
  std::vector<std::pair<i64, int>> out;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) n /= p, ++e;
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline i64 euler_phi(i64 n) {
  i64 r = n;
  for (auto [p, e] : factor(n)) r = r / p * (p - 1);
  return r;
}

inline i64 ipow(i64 b, int e) {
  i64 r = 1;
  while (e-- > 0) r *= b;
  return r;
}

/// Legendre symbol (a|p) for an odd prime p.
inline int legendre(i64 a, i64 p) {
  a = mod(a, p);
  if (a == 0) return 0;
  i64 r = 1, b = a, e = (p - 1) / 2;
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r == 1 ? 1 : -1;
}

inline i64 isqrt(i64 n) {
  if (n < 0) return -1;
  i64 r = static_cast<i64>(__builtin_sqrtl(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace classinv
