// Exact arithmetic in F_ell and its extensions F_{ell^d}.
//
// A FieldDescriptor fixes (ell, d, modulus); elements are coefficient vectors
// in the power basis of the modulus, every coefficient reduced into [0, ell).
// Descriptors are interned and immutable, so a plain pointer identifies a
// field for the lifetime of the process. Heavy code paths work on raw
// uint64_t spans through the descriptor's span ops; FieldElement is the boxed
// value type used at API boundaries.
#pragma once

#include <algorithm>
#include <cassert>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "msf/arith.hpp"

namespace msf {

class FieldDescriptor;
using FieldRef = const FieldDescriptor*;

namespace detail {

// Polynomials over the prime field F_ell, dense int64 coefficients in [0,ell).
using PfPoly = std::vector<int64_t>;

inline void pf_trim(PfPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline PfPoly pf_mul(const PfPoly& a, const PfPoly& b, int64_t ell) {
  if (a.empty() || b.empty()) return {};
  PfPoly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % ell;
  }
  pf_trim(c);
  return c;
}

// remainder of a modulo monic m
inline PfPoly pf_rem(PfPoly a, const PfPoly& m, int64_t ell) {
  pf_trim(a);
  size_t dm = m.size() - 1;
  while (a.size() > dm) {
    int64_t lead = a.back();
    size_t shift = a.size() - 1 - dm;
    if (lead != 0) {
      for (size_t i = 0; i < dm; ++i)
        a[shift + i] = mod_pos(a[shift + i] - lead * m[i], ell);
    }
    a.pop_back();
    pf_trim(a);
    if (a.size() <= dm) break;
  }
  return a;
}

inline PfPoly pf_powmod(PfPoly base, uint64_t e, const PfPoly& m, int64_t ell) {
  PfPoly r{1};
  base = pf_rem(std::move(base), m, ell);
  while (e) {
    if (e & 1) r = pf_rem(pf_mul(r, base, ell), m, ell);
    e >>= 1;
    if (e) base = pf_rem(pf_mul(base, base, ell), m, ell);
  }
  return r;
}

inline PfPoly pf_gcd(PfPoly a, PfPoly b, int64_t ell) {
  pf_trim(a);
  pf_trim(b);
  while (!b.empty()) {
    // make b monic before reducing
    int64_t inv = inv_mod(b.back(), ell);
    for (auto& c : b) c = (c * inv) % ell;
    PfPoly r = pf_rem(a, b, ell);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    int64_t inv = inv_mod(a.back(), ell);
    for (auto& c : a) c = (c * inv) % ell;
  }
  return a;
}

// Rabin test; m monic of degree >= 1 over F_ell.
inline bool pf_is_irreducible(const PfPoly& m, int64_t ell) {
  size_t d = m.size() - 1;
  if (d == 0) return false;
  PfPoly x{0, 1};
  // x^(ell^d) == x mod m
  PfPoly t = x;
  for (size_t i = 0; i < d; ++i) t = pf_powmod(std::move(t), static_cast<uint64_t>(ell), m, ell);
  PfPoly diff = t;
  diff.resize(std::max<size_t>(diff.size(), 2), 0);
  diff[1] = mod_pos(diff[1] - 1, ell);
  pf_trim(diff);
  if (!diff.empty()) return false;
  for (int64_t q : prime_divisors(static_cast<int64_t>(d))) {
    size_t e = d / static_cast<size_t>(q);
    PfPoly s = x;
    for (size_t i = 0; i < e; ++i) s = pf_powmod(std::move(s), static_cast<uint64_t>(ell), m, ell);
    s.resize(std::max<size_t>(s.size(), 2), 0);
    s[1] = mod_pos(s[1] - 1, ell);
    pf_trim(s);
    if (pf_gcd(s, m, ell).size() != 1) return false;  // gcd must be the constant 1
  }
  return true;
}

}  // namespace detail

class FieldDescriptor {
 public:
  int64_t ell;
  int degree;
  std::vector<int64_t> modulus;  // constant term first, monic, length degree+1

  FieldDescriptor(int64_t ell_, int degree_, std::vector<int64_t> mod_)
      : ell(ell_), degree(degree_), modulus(std::move(mod_)) {}

  bool prime_field() const { return degree == 1; }
  uint64_t order() const {
    uint64_t o = 1;
    for (int i = 0; i < degree; ++i) o *= static_cast<uint64_t>(ell);
    return o;
  }

  // ---- span ops; all spans have length `degree`, reduced mod ell ----

  void set_zero(uint64_t* a) const { std::fill(a, a + degree, 0); }
  void set_from_int(uint64_t* a, int64_t v) const {
    set_zero(a);
    a[0] = static_cast<uint64_t>(mod_pos(v, ell));
  }
  bool is_zero(const uint64_t* a) const {
    for (int i = 0; i < degree; ++i)
      if (a[i]) return false;
    return true;
  }
  bool eq(const uint64_t* a, const uint64_t* b) const {
    return std::equal(a, a + degree, b);
  }
  void add(uint64_t* dst, const uint64_t* a, const uint64_t* b) const {
    for (int i = 0; i < degree; ++i) {
      uint64_t s = a[i] + b[i];
      dst[i] = s >= static_cast<uint64_t>(ell) ? s - ell : s;
    }
  }
  void sub(uint64_t* dst, const uint64_t* a, const uint64_t* b) const {
    for (int i = 0; i < degree; ++i) {
      uint64_t s = a[i] + static_cast<uint64_t>(ell) - b[i];
      dst[i] = s >= static_cast<uint64_t>(ell) ? s - ell : s;
    }
  }
  void neg(uint64_t* dst, const uint64_t* a) const {
    for (int i = 0; i < degree; ++i) dst[i] = a[i] ? static_cast<uint64_t>(ell) - a[i] : 0;
  }
  // dst += c*a with scalar span c not allowed to alias dst
  void mul(uint64_t* dst, const uint64_t* a, const uint64_t* b) const {
    if (degree == 1) {
      dst[0] = (a[0] * b[0]) % static_cast<uint64_t>(ell);
      return;
    }
    uint64_t tmp[2 * kMaxDegree - 1];
    int n = 2 * degree - 1;
    std::fill(tmp, tmp + n, 0);
    for (int i = 0; i < degree; ++i) {
      if (!a[i]) continue;
      for (int j = 0; j < degree; ++j) tmp[i + j] = (tmp[i + j] + a[i] * b[j]) % ell;
    }
    // reduce by the monic modulus
    for (int i = n - 1; i >= degree; --i) {
      uint64_t lead = tmp[i];
      if (!lead) continue;
      tmp[i] = 0;
      int shift = i - degree;
      for (int j = 0; j < degree; ++j) {
        uint64_t m = static_cast<uint64_t>(modulus[j]);
        if (m) tmp[shift + j] = (tmp[shift + j] + (static_cast<uint64_t>(ell) - m) % ell * lead) % ell;
      }
    }
    std::copy(tmp, tmp + degree, dst);
  }
  void mul_add(uint64_t* dst, const uint64_t* a, const uint64_t* b) const {
    if (degree == 1) {
      dst[0] = (dst[0] + a[0] * b[0]) % static_cast<uint64_t>(ell);
      return;
    }
    uint64_t prod[kMaxDegree];
    mul(prod, a, b);
    add(dst, dst, prod);
  }
  void pow(uint64_t* dst, const uint64_t* a, uint64_t e) const {
    uint64_t base[kMaxDegree], acc[kMaxDegree];
    std::copy(a, a + degree, base);
    set_from_int(acc, 1);
    while (e) {
      if (e & 1) {
        uint64_t t[kMaxDegree];
        mul(t, acc, base);
        std::copy(t, t + degree, acc);
      }
      e >>= 1;
      if (e) {
        uint64_t t[kMaxDegree];
        mul(t, base, base);
        std::copy(t, t + degree, base);
      }
    }
    std::copy(acc, acc + degree, dst);
  }
  void inv(uint64_t* dst, const uint64_t* a) const {
    if (is_zero(a)) throw InputError("field inverse of zero");
    if (degree == 1) {
      dst[0] = static_cast<uint64_t>(inv_mod(static_cast<int64_t>(a[0]), ell));
      return;
    }
    // extended Euclid in F_ell[x] against the modulus
    detail::PfPoly r0 = modulus;
    detail::PfPoly r1(a, a + degree);
    detail::pf_trim(r1);
    detail::PfPoly s0{}, s1{1};
    while (!r1.empty()) {
      // divide r0 by r1 (r1 not necessarily monic)
      int64_t lead_inv = inv_mod(r1.back(), ell);
      detail::PfPoly q(r0.size() > r1.size() - 1 ? r0.size() - r1.size() + 1 : 1, 0);
      detail::PfPoly rem = r0;
      while (rem.size() >= r1.size() && !rem.empty()) {
        int64_t c = (rem.back() * lead_inv) % ell;
        size_t shift = rem.size() - r1.size();
        q[shift] = c;
        for (size_t i = 0; i < r1.size(); ++i)
          rem[shift + i] = mod_pos(rem[shift + i] - c * r1[i], ell);
        detail::pf_trim(rem);
      }
      detail::PfPoly s2 = s0;
      {
        detail::PfPoly qs = detail::pf_mul(q, s1, ell);
        s2.resize(std::max(s2.size(), qs.size()), 0);
        for (size_t i = 0; i < qs.size(); ++i) s2[i] = mod_pos(s2[i] - qs[i], ell);
        detail::pf_trim(s2);
      }
      r0 = std::move(r1);
      r1 = std::move(rem);
      s0 = std::move(s1);
      s1 = std::move(s2);
    }
    // r0 = gcd (a unit times 1 since modulus irreducible); normalize
    if (r0.size() != 1) throw InternalError("field inverse: modulus not irreducible?");
    int64_t scale = inv_mod(r0[0], ell);
    std::fill(dst, dst + degree, 0);
    for (size_t i = 0; i < s0.size() && i < static_cast<size_t>(degree); ++i)
      dst[i] = static_cast<uint64_t>((s0[i] * scale) % ell);
  }

  static constexpr int kMaxDegree = 64;

 private:
  friend FieldRef make_extension(int64_t, int);
};

// Interned canonical descriptor for F_{ell^d}: modulus is the
// lexicographically smallest monic irreducible (constant term compared
// first). Repeated calls return the same pointer.
inline FieldRef make_extension(int64_t ell, int degree) {
  if (!is_prime(ell)) throw InputError("not prime");
  if (degree < 1) throw InputError("extension degree must be >= 1");
  if (degree > FieldDescriptor::kMaxDegree) throw InputError("extension degree too large");
  static std::map<std::pair<int64_t, int>, std::unique_ptr<FieldDescriptor>> registry;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(ell, degree);
  auto it = registry.find(key);
  if (it != registry.end()) return it->second.get();

  std::vector<int64_t> mod(degree + 1, 0);
  mod[degree] = 1;
  if (degree == 1) {
    // modulus x: elements are single coefficients
  } else {
    // scan monic candidates in lex order of (c0, c1, ..., c_{d-1})
    std::vector<int64_t> c(degree, 0);
    bool found = false;
    while (!found) {
      detail::PfPoly cand(degree + 1);
      for (int i = 0; i < degree; ++i) cand[i] = c[i];
      cand[degree] = 1;
      if (detail::pf_is_irreducible(cand, ell)) {
        for (int i = 0; i < degree; ++i) mod[i] = c[i];
        found = true;
        break;
      }
      // increment with c0 as the most significant digit
      int pos = degree - 1;
      while (pos >= 0 && c[pos] == ell - 1) { c[pos] = 0; --pos; }
      if (pos < 0) throw InternalError("no irreducible polynomial found");
      ++c[pos];
    }
  }
  auto desc = std::make_unique<FieldDescriptor>(ell, degree, std::move(mod));
  FieldRef ref = desc.get();
  registry.emplace(key, std::move(desc));
  return ref;
}

class FieldElement {
 public:
  FieldElement() : field_(nullptr) {}
  FieldElement(FieldRef f, int64_t v) : field_(f), c_(f->degree, 0) {
    field_->set_from_int(c_.data(), v);
  }
  FieldElement(FieldRef f, std::vector<uint64_t> coeffs) : field_(f), c_(std::move(coeffs)) {
    if (c_.size() != static_cast<size_t>(f->degree)) throw InputError("coefficient length mismatch");
    for (auto& x : c_) x %= static_cast<uint64_t>(f->ell);
  }

  FieldRef field() const { return field_; }
  const std::vector<uint64_t>& coeffs() const { return c_; }
  const uint64_t* data() const { return c_.data(); }
  uint64_t* data() { return c_.data(); }

  bool is_zero() const { return field_->is_zero(c_.data()); }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    check_same(a, b);
    FieldElement r(a.field_, 0);
    a.field_->add(r.data(), a.data(), b.data());
    return r;
  }
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    check_same(a, b);
    FieldElement r(a.field_, 0);
    a.field_->sub(r.data(), a.data(), b.data());
    return r;
  }
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    check_same(a, b);
    FieldElement r(a.field_, 0);
    a.field_->mul(r.data(), a.data(), b.data());
    return r;
  }
  FieldElement operator-() const {
    FieldElement r(field_, 0);
    field_->neg(r.data(), data());
    return r;
  }
  FieldElement inverse() const {
    FieldElement r(field_, 0);
    field_->inv(r.data(), data());
    return r;
  }
  FieldElement pow(uint64_t e) const {
    FieldElement r(field_, 0);
    field_->pow(r.data(), data(), e);
    return r;
  }
  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.field_ == b.field_ && a.c_ == b.c_;
  }
  friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

  // lexicographic on coefficient sequences, constant term first
  friend bool operator<(const FieldElement& a, const FieldElement& b) {
    return a.c_ < b.c_;
  }

 private:
  static void check_same(const FieldElement& a, const FieldElement& b) {
    if (a.field_ != b.field_) throw InputError("field mismatch");
  }
  FieldRef field_;
  std::vector<uint64_t> c_;
};

// x^ell; fixes the prime subfield, generates Gal(F_{ell^d}/F_ell)
inline FieldElement frobenius(const FieldElement& x) {
  return x.pow(static_cast<uint64_t>(x.field()->ell));
}

}  // namespace msf
