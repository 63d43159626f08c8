// Heilbronn matrices (Cremona's determinant-p family) and Merel's
// determinant-m family. Both are streamed to a callback as (a, b, c, d)
// acting on Manin symbols on the right.
#pragma once

#include "msf/arith.hpp"

namespace msf {

namespace detail {
inline int64_t floor_div(int64_t a, int64_t b) {
  int64_t q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}
// nearest integer to a/b, halves rounded up
inline int64_t round_div(int64_t a, int64_t b) { return floor_div(2 * a + b, 2 * b); }
}  // namespace detail

// Cremona's Heilbronn family for a prime p. Deterministic order; the p = 2
// list is pinned by a golden test. Works for p | n as well (terms whose
// image point leaves P^1(Z/n) are dropped by the caller).
template <class Emit>
inline void heilbronn_cremona(int64_t p, Emit&& emit) {
  emit(1, 0, 0, p);
  for (int64_t r = -(p / 2); r <= (p - 1) / 2; ++r) {
    int64_t x1 = p, x2 = -r, y1 = 0, y2 = 1;
    int64_t a = -p, b = r;
    emit(x1, x2, y1, y2);
    while (b != 0) {
      int64_t q = detail::round_div(a, b);
      int64_t c = a - b * q;
      a = -b;
      b = c;
      int64_t x3 = q * x2 - x1;
      x1 = x2;
      x2 = x3;
      int64_t y3 = q * y2 - y1;
      y1 = y2;
      y2 = y3;
      emit(x1, x2, y1, y2);
    }
  }
}

inline int64_t heilbronn_count(int64_t p) {
  int64_t count = 0;
  heilbronn_cremona(p, [&](int64_t, int64_t, int64_t, int64_t) { ++count; });
  return count;
}

// Merel's family: all integer matrices with det = m, a > b >= 0, d > c >= 0.
// Used as an independent route to T_m for gcd(m, n) = 1.
template <class Emit>
inline void merel_family(int64_t m, Emit&& emit) {
  for (int64_t a = 1; a <= m; ++a) {
    for (int64_t d = (m + a - 1) / a; d <= m; ++d) {
      int64_t t = a * d - m;
      if (t < 0) continue;
      if (t == 0) {
        for (int64_t c = 0; c < d; ++c) emit(a, 0, c, d);
        for (int64_t b = 1; b < a; ++b) emit(a, b, 0, d);
        continue;
      }
      for (int64_t b = 1; b <= t && b < a; ++b) {
        if (t % b) continue;
        int64_t c = t / b;
        if (c < d) emit(a, b, c, d);
      }
    }
  }
}

}  // namespace msf
