#pragma once

#include <cstdint>
#include <stdexcept>

namespace pmconv::exact {

// Scalar arithmetic in the prime field F_p. Values are canonical residues
// in [0, p). p is carried by the containing matrix, not by the scalar.

inline bool is_prime(uint32_t p) {
  if (p < 2) return false;
  for (uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

inline uint32_t fp_add(uint32_t a, uint32_t b, uint32_t p) {
  uint32_t s = a + b;
  return s >= p ? s - p : s;
}

inline uint32_t fp_sub(uint32_t a, uint32_t b, uint32_t p) {
  return a >= b ? a - b : a + p - b;
}

inline uint32_t fp_neg(uint32_t a, uint32_t p) { return a == 0 ? 0 : p - a; }

inline uint32_t fp_mul(uint32_t a, uint32_t b, uint32_t p) {
  return static_cast<uint32_t>((static_cast<uint64_t>(a) * b) % p);
}

inline uint32_t fp_pow(uint32_t a, uint64_t e, uint32_t p) {
  uint32_t r = 1 % p;
  while (e) {
    if (e & 1) r = fp_mul(r, a, p);
    a = fp_mul(a, a, p);
    e >>= 1;
  }
  return r;
}

inline uint32_t fp_inv(uint32_t a, uint32_t p) {
  if (a == 0) throw std::domain_error("fp_inv: zero is not invertible");
  return fp_pow(a, p - 2, p);  // p prime
}

inline uint32_t fp_from_int(long long v, uint32_t p) {
  long long r = v % static_cast<long long>(p);
  if (r < 0) r += p;
  return static_cast<uint32_t>(r);
}

}  // namespace pmconv::exact
