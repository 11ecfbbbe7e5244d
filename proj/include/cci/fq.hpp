#pragma once

// Tiny arithmetic helpers for the prime fields F_q (q an odd prime) used by
// the matrix-group coordinates.

#include <stdexcept>

namespace cci {

constexpr bool is_odd_prime(int q) {
  if (q < 3 || q % 2 == 0) return false;
  for (int d = 3; d * d <= q; d += 2)
    if (q % d == 0) return false;
  return true;
}

// Normalises v into [0, q).
constexpr int mod_norm(long long v, int q) {
  long long r = v % q;
  return static_cast<int>(r < 0 ? r + q : r);
}

constexpr int mod_add(int a, int b, int q) { return mod_norm(static_cast<long long>(a) + b, q); }
constexpr int mod_sub(int a, int b, int q) { return mod_norm(static_cast<long long>(a) - b, q); }
constexpr int mod_mul(int a, int b, int q) { return mod_norm(static_cast<long long>(a) * b, q); }

constexpr int mod_pow(int base, long long e, int q) {
  long long r = 1;
  long long b = mod_norm(base, q);
  while (e > 0) {
    if (e & 1) r = r * b % q;
    b = b * b % q;
    e >>= 1;
  }
  return static_cast<int>(r);
}

// Multiplicative inverse in F_q; requires q prime and a not divisible by q.
inline int mod_inv(int a, int q) {
  a = mod_norm(a, q);
  if (a == 0) throw std::domain_error("mod_inv: zero has no inverse");
  return mod_pow(a, q - 2, q);
}

// The field element 1/2; for odd q this is (q+1)/2, never an integer halving.
constexpr int half(int q) { return (q + 1) / 2; }

}  // namespace cci
