// Elementary integer arithmetic: gcd chains, primes, divisor/genus counts,
// index and dimension formulas for congruence subgroups, Sturm bounds.
#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace msf {

using std::int64_t;
using std::uint64_t;

struct InputError : std::runtime_error {
  explicit InputError(const std::string& m) : std::runtime_error(m) {}
};

struct InternalError : std::runtime_error {
  explicit InternalError(const std::string& m) : std::runtime_error(m) {}
};

inline int64_t gcd_i64(int64_t a, int64_t b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) { int64_t t = a % b; a = b; b = t; }
  return a;
}

// g = ax + by
inline int64_t ext_gcd(int64_t a, int64_t b, int64_t& x, int64_t& y) {
  if (b == 0) { x = (a < 0) ? -1 : 1; y = 0; return a < 0 ? -a : a; }
  int64_t x1, y1;
  int64_t g = ext_gcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

inline int64_t mod_pos(int64_t a, int64_t m) {
  a %= m;
  return a < 0 ? a + m : a;
}

inline int64_t inv_mod(int64_t a, int64_t m) {
  int64_t x, y;
  int64_t g = ext_gcd(mod_pos(a, m), m, x, y);
  if (g != 1) throw InputError("inv_mod: not invertible");
  return mod_pos(x, m);
}

inline int64_t pow_mod(int64_t a, uint64_t e, int64_t m) {
  int64_t r = 1 % m;
  a = mod_pos(a, m);
  while (e) {
    if (e & 1) r = (r * a) % m;
    a = (a * a) % m;
    e >>= 1;
  }
  return r;
}

inline bool is_prime(int64_t n) {
  if (n < 2) return false;
  for (int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<int64_t> primes_up_to(int64_t bound) {
  std::vector<int64_t> out;
  if (bound < 2) return out;
  std::vector<bool> comp(static_cast<size_t>(bound) + 1, false);
  for (int64_t i = 2; i <= bound; ++i) {
    if (!comp[i]) {
      out.push_back(i);
      for (int64_t j = i * i; j <= bound; j += i) comp[j] = true;
    }
  }
  return out;
}

// (prime, exponent) pairs, ascending primes
inline std::vector<std::pair<int64_t, int>> factorize(int64_t n) {
  std::vector<std::pair<int64_t, int>> f;
  if (n < 0) n = -n;
  for (int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      int e = 0;
      while (n % p == 0) { n /= p; ++e; }
      f.emplace_back(p, e);
    }
  }
  if (n > 1) f.emplace_back(n, 1);
  return f;
}

inline std::vector<int64_t> prime_divisors(int64_t n) {
  std::vector<int64_t> out;
  for (auto& [p, e] : factorize(n)) out.push_back(p);
  return out;
}

inline int valuation(int64_t n, int64_t p) {
  int v = 0;
  while (n % p == 0 && n != 0) { n /= p; ++v; }
  return v;
}

inline std::vector<int64_t> divisors(int64_t n) {
  std::vector<int64_t> d;
  for (int64_t i = 1; i * i <= n; ++i) {
    if (n % i == 0) {
      d.push_back(i);
      if (i != n / i) d.push_back(n / i);
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}

inline int64_t euler_phi(int64_t n) {
  int64_t r = n;
  for (auto& [p, e] : factorize(n)) r = r / p * (p - 1);
  return r;
}

// [SL2(Z) : Gamma0(n)] = n * prod (1 + 1/p)
inline int64_t gamma0_index(int64_t n) {
  int64_t idx = n;
  for (auto& [p, e] : factorize(n)) idx = idx / p * (p + 1);
  return idx;
}

// [SL2(Z) : Gamma1(n)]; Gamma1(1)=SL2(Z), Gamma1(2)=Gamma0(2)
inline int64_t gamma1_index(int64_t n) {
  if (n == 1) return 1;
  if (n == 2) return 3;
  int64_t idx = n * n;
  for (auto& [p, e] : factorize(n)) idx = idx / (p * p) * (p * p - 1);
  return idx / 2;
}

inline int64_t nu2_gamma0(int64_t n) {
  if (n % 4 == 0) return 0;
  int64_t r = 1;
  for (auto& [p, e] : factorize(n)) {
    if (p == 2) continue;
    if (p % 4 == 1) r *= 2;
    else return 0;
  }
  return r;
}

inline int64_t nu3_gamma0(int64_t n) {
  if (n % 9 == 0) return 0;
  int64_t r = 1;
  for (auto& [p, e] : factorize(n)) {
    if (p == 3) continue;
    if (p % 3 == 1) r *= 2;
    else return 0;
  }
  return r;
}

inline int64_t cusps_gamma0(int64_t n) {
  int64_t c = 0;
  for (int64_t d : divisors(n)) c += euler_phi(gcd_i64(d, n / d));
  return c;
}

inline int64_t cusps_gamma1(int64_t n) {
  if (n == 1) return 1;
  if (n == 2) return 2;
  if (n == 3) return 2;
  if (n == 4) return 3;
  int64_t c = 0;
  for (int64_t d : divisors(n)) c += euler_phi(d) * euler_phi(n / d);
  return c / 2;
}

inline int64_t genus_gamma0(int64_t n) {
  int64_t idx = gamma0_index(n);
  // 12g = 12 + idx - 3*nu2 - 4*nu3 - 6*nuinf
  int64_t twelve_g = 12 + idx - 3 * nu2_gamma0(n) - 4 * nu3_gamma0(n) - 6 * cusps_gamma0(n);
  if (twelve_g % 12 != 0) throw InternalError("genus_gamma0: non-integral genus");
  return twelve_g / 12;
}

inline int64_t genus_gamma1(int64_t n) {
  if (n <= 4) return 0;
  int64_t idx = gamma1_index(n);
  int64_t twelve_g = 12 + idx - 6 * cusps_gamma1(n);
  if (twelve_g % 12 != 0) throw InternalError("genus_gamma1: non-integral genus");
  return twelve_g / 12;
}

enum class GroupKind { Gamma0, Gamma1 };

// ceil(k * index / 12)
inline int64_t sturm_bound(int64_t n, int64_t k, GroupKind g = GroupKind::Gamma0) {
  if (n < 1 || k < 1) throw InputError("sturm_bound: need n,k >= 1");
  int64_t idx = (g == GroupKind::Gamma0) ? gamma0_index(n) : gamma1_index(n);
  return (k * idx + 11) / 12;
}

// dim S_k(Gamma0(n)) with trivial character, characteristic zero.
inline int64_t dim_cusp_gamma0(int64_t n, int64_t k) {
  if (k < 2) throw InputError("dim_cusp_char0: weight must be >= 2");
  if (k % 2 == 1) return 0;
  int64_t g = genus_gamma0(n);
  if (k == 2) return g;
  int64_t nu2 = nu2_gamma0(n), nu3 = nu3_gamma0(n), nuinf = cusps_gamma0(n);
  return (k - 1) * (g - 1) + (k / 4) * nu2 + (k / 3) * nu3 + (k / 2 - 1) * nuinf;
}

// dim S_k(Gamma1(n)), characteristic zero. For n <= 4 the elliptic-point and
// irregular-cusp data enter; those few groups are handled explicitly.
inline int64_t dim_cusp_gamma1(int64_t n, int64_t k) {
  if (k < 2) throw InputError("dim_cusp_char0: weight must be >= 2");
  if (n <= 2) return dim_cusp_gamma0(n, k);           // Gamma1(n) = Gamma0(n)
  if (n == 3) {
    // index 4, nu3 = 1, cusps 2 (both regular), genus 0
    if (k == 2) return 0;
    if (k % 2 == 0) return (k - 1) * (-1) + (k / 3) * 1 + (k / 2 - 1) * 2;
    return (k - 1) * (-1) + k / 3 + (k - 2);  // odd k
  }
  if (n == 4) {
    // index 6, cusps: 2 regular + 1 irregular, genus 0, no elliptic points
    if (k == 2) return 0;
    if (k % 2 == 0) return (k - 1) * (-1) + (k / 2 - 1) * 3;
    return (k - 1) * (-1) + (k - 2) + (k - 1) / 2;
  }
  int64_t g = genus_gamma1(n);
  if (k == 2) return g;
  int64_t nuinf = cusps_gamma1(n);
  if (k % 2 == 0) return (k - 1) * (g - 1) + (k / 2 - 1) * nuinf;
  // all cusps regular for n >= 5; nuinf is even so this is integral
  return (k - 1) * (g - 1) + (k - 2) * nuinf / 2;
}

inline int64_t dim_cusp_char0(int64_t n, int64_t k, GroupKind grp = GroupKind::Gamma0) {
  return grp == GroupKind::Gamma0 ? dim_cusp_gamma0(n, k) : dim_cusp_gamma1(n, k);
}

}  // namespace msf
