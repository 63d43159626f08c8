// Dense univariate polynomials over a FieldDescriptor, univariate
// factorization (squarefree / distinct-degree / equal-degree), and the
// deterministic embeddings F_{ell^a} -> F_{ell^ab}.
#pragma once

#include <random>

#include "msf/ff.hpp"

namespace msf {

class Poly {
 public:
  explicit Poly(FieldRef f) : f_(f) {}
  Poly(FieldRef f, const std::vector<FieldElement>& coeffs) : f_(f) {
    c_.resize(coeffs.size() * f->degree);
    for (size_t i = 0; i < coeffs.size(); ++i) {
      if (coeffs[i].field() != f) throw InputError("poly coefficient field mismatch");
      std::copy(coeffs[i].data(), coeffs[i].data() + f->degree, span(i));
    }
    trim();
  }
  static Poly from_ints(FieldRef f, const std::vector<int64_t>& ints) {
    Poly p(f);
    p.c_.assign(ints.size() * f->degree, 0);
    for (size_t i = 0; i < ints.size(); ++i) f->set_from_int(p.span(i), ints[i]);
    p.trim();
    return p;
  }
  static Poly zero(FieldRef f) { return Poly(f); }
  static Poly one(FieldRef f) { return from_ints(f, {1}); }
  static Poly x(FieldRef f) { return from_ints(f, {0, 1}); }

  FieldRef field() const { return f_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) / f_->degree - 1; }  // -1 for zero

  FieldElement coeff(int i) const {
    if (i < 0 || i > degree()) return FieldElement(f_, 0);
    std::vector<uint64_t> v(span(i), span(i) + f_->degree);
    return FieldElement(f_, std::move(v));
  }
  void set_coeff(int i, const FieldElement& v) {
    if (i >= static_cast<int>(c_.size()) / f_->degree)
      c_.resize((i + 1) * f_->degree, 0);
    std::copy(v.data(), v.data() + f_->degree, span(i));
    trim();
  }
  FieldElement leading() const { return coeff(degree()); }

  bool is_monic() const {
    return !is_zero() && leading() == FieldElement(f_, 1);
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    return a.f_ == b.f_ && a.c_ == b.c_;
  }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  friend Poly operator+(const Poly& a, const Poly& b) {
    Poly r(a.f_);
    size_t n = std::max(a.c_.size(), b.c_.size());
    r.c_.assign(n, 0);
    int d = a.f_->degree;
    for (size_t i = 0; i * d < n; ++i) {
      uint64_t tmp[FieldDescriptor::kMaxDegree];
      std::fill(tmp, tmp + d, 0);
      if (i * d < a.c_.size()) a.f_->add(tmp, tmp, a.span(i));
      if (i * d < b.c_.size()) a.f_->add(tmp, tmp, b.span(i));
      std::copy(tmp, tmp + d, r.span(i));
    }
    r.trim();
    return r;
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    Poly nb = b;
    int d = a.f_->degree;
    for (size_t i = 0; i * d < nb.c_.size(); ++i) a.f_->neg(nb.span(i), nb.span(i));
    return a + nb;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly(a.f_);
    int d = a.f_->degree;
    int da = a.degree(), db = b.degree();
    Poly r(a.f_);
    r.c_.assign((da + db + 1) * d, 0);
    uint64_t prod[FieldDescriptor::kMaxDegree];
    for (int i = 0; i <= da; ++i) {
      if (a.f_->is_zero(a.span(i))) continue;
      for (int j = 0; j <= db; ++j) {
        a.f_->mul(prod, a.span(i), b.span(j));
        a.f_->add(r.span(i + j), r.span(i + j), prod);
      }
    }
    r.trim();
    return r;
  }
  Poly operator*(const FieldElement& s) const {
    Poly r = *this;
    int d = f_->degree;
    uint64_t prod[FieldDescriptor::kMaxDegree];
    for (size_t i = 0; i * d < r.c_.size(); ++i) {
      f_->mul(prod, r.span(i), s.data());
      std::copy(prod, prod + d, r.span(i));
    }
    r.trim();
    return r;
  }

  // division with remainder; b need not be monic
  static void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
    if (b.is_zero()) throw InputError("polynomial division by zero");
    FieldRef f = a.f_;
    int d = f->degree;
    q = Poly(f);
    r = a;
    int db = b.degree();
    FieldElement lead_inv = b.leading().inverse();
    if (r.degree() >= db) q.c_.assign((r.degree() - db + 1) * d, 0);
    uint64_t c[FieldDescriptor::kMaxDegree], prod[FieldDescriptor::kMaxDegree];
    while (!r.is_zero() && r.degree() >= db) {
      int shift = r.degree() - db;
      f->mul(c, r.span(r.degree()), lead_inv.data());
      f->add(q.span(shift), q.span(shift), c);
      for (int i = 0; i <= db; ++i) {
        f->mul(prod, c, b.span(i));
        f->sub(r.span(shift + i), r.span(shift + i), prod);
      }
      r.trim();
    }
    q.trim();
  }
  friend Poly operator/(const Poly& a, const Poly& b) {
    Poly q(a.f_), r(a.f_);
    divmod(a, b, q, r);
    return q;
  }
  friend Poly operator%(const Poly& a, const Poly& b) {
    Poly q(a.f_), r(a.f_);
    divmod(a, b, q, r);
    return r;
  }

  // returns the leading coefficient that was divided out
  FieldElement make_monic() {
    FieldElement lead = leading();
    if (lead == FieldElement(f_, 1)) return lead;
    FieldElement inv = lead.inverse();
    *this = *this * inv;
    return lead;
  }

  Poly derivative() const {
    Poly r(f_);
    int d = f_->degree;
    int deg = degree();
    if (deg < 1) return r;
    r.c_.assign(deg * d, 0);
    uint64_t k[FieldDescriptor::kMaxDegree], prod[FieldDescriptor::kMaxDegree];
    for (int i = 1; i <= deg; ++i) {
      f_->set_from_int(k, i);
      f_->mul(prod, k, span(i));
      std::copy(prod, prod + d, r.span(i - 1));
    }
    r.trim();
    return r;
  }

  FieldElement eval(const FieldElement& x) const {
    FieldElement acc(f_, 0);
    for (int i = degree(); i >= 0; --i) acc = acc * x + coeff(i);
    return acc;
  }

  // lexicographic on (degree, coefficient words from constant term up)
  friend bool operator<(const Poly& a, const Poly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return a.c_ < b.c_;
  }

 private:
  uint64_t* span(size_t i) { return c_.data() + i * f_->degree; }
  const uint64_t* span(size_t i) const { return c_.data() + i * f_->degree; }
  void trim() {
    int d = f_->degree;
    while (!c_.empty() && f_->is_zero(c_.data() + c_.size() - d)) c_.resize(c_.size() - d);
  }
  FieldRef f_;
  std::vector<uint64_t> c_;
};

inline Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    b.make_monic();
    Poly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.is_zero()) a.make_monic();
  return a;
}

inline Poly powmod(Poly base, uint64_t e, const Poly& m) {
  Poly r = Poly::one(base.field());
  base = base % m;
  while (e) {
    if (e & 1) r = (r * base) % m;
    e >>= 1;
    if (e) base = (base * base) % m;
  }
  return r;
}

namespace detail {

// ell-th root of a coefficientwise: a -> a^(ell^(d-1))
inline FieldElement ell_th_root(const FieldElement& a) {
  FieldElement r = a;
  for (int i = 0; i < a.field()->degree - 1; ++i) r = frobenius(r);
  return r;
}

// f = g(x^ell) -> g, taking ell-th roots of coefficients
inline Poly extract_ell_root(const Poly& f) {
  FieldRef fd = f.field();
  int64_t ell = fd->ell;
  std::vector<FieldElement> coeffs;
  for (int i = 0; i <= f.degree(); i += static_cast<int>(ell))
    coeffs.push_back(ell_th_root(f.coeff(i)));
  return Poly(fd, coeffs);
}

inline std::vector<std::pair<Poly, int>> squarefree_decompose(const Poly& f0) {
  std::vector<std::pair<Poly, int>> out;
  FieldRef fd = f0.field();
  int64_t ell = fd->ell;
  Poly f = f0;
  f.make_monic();
  Poly fp = f.derivative();
  if (fp.is_zero()) {
    Poly g = extract_ell_root(f);
    for (auto& [s, e] : squarefree_decompose(g)) out.emplace_back(s, e * static_cast<int>(ell));
    return out;
  }
  Poly c = gcd(f, fp);
  Poly w = f / c;
  int i = 1;
  while (w.degree() > 0) {
    Poly y = gcd(w, c);
    Poly z = w / y;
    if (z.degree() > 0) out.emplace_back(z, i);
    c = c / y;
    w = std::move(y);
    ++i;
  }
  if (c.degree() > 0) {
    Poly g = extract_ell_root(c);
    for (auto& [s, e] : squarefree_decompose(g)) out.emplace_back(s, e * static_cast<int>(ell));
  }
  return out;
}

// x^(q^j) mod f stepping one application of Frobenius at a time; q = ell^d
inline Poly frobenius_power_mod(const Poly& base, const Poly& f) {
  FieldRef fd = f.field();
  Poly r = base;
  uint64_t ell = static_cast<uint64_t>(fd->ell);
  for (int i = 0; i < fd->degree; ++i) r = powmod(r, ell, f);
  return r;
}

// distinct-degree decomposition of a monic squarefree f
inline std::vector<std::pair<Poly, int>> ddf(const Poly& f0) {
  std::vector<std::pair<Poly, int>> out;
  FieldRef fd = f0.field();
  Poly f = f0;
  Poly h = Poly::x(fd);
  Poly x = Poly::x(fd);
  int dd = 1;
  while (2 * dd <= f.degree()) {
    h = frobenius_power_mod(h, f);
    Poly g = gcd(h - x, f);
    if (g.degree() > 0) {
      out.emplace_back(g, dd);
      f = f / g;
      h = h % f;
    }
    ++dd;
  }
  if (f.degree() > 0) out.emplace_back(f, f.degree());
  return out;
}

inline Poly random_poly(FieldRef fd, int max_deg, std::mt19937_64& rng) {
  std::vector<FieldElement> coeffs;
  for (int i = 0; i < max_deg; ++i) {
    std::vector<uint64_t> w(fd->degree);
    for (auto& v : w) v = rng() % static_cast<uint64_t>(fd->ell);
    coeffs.emplace_back(fd, std::move(w));
  }
  return Poly(fd, coeffs);
}

// equal-degree splitting (Cantor-Zassenhaus) of monic squarefree f whose
// irreducible factors all have degree dd
inline void edf(const Poly& f, int dd, std::mt19937_64& rng, std::vector<Poly>& out) {
  FieldRef fd = f.field();
  if (f.degree() == dd) {
    Poly g = f;
    g.make_monic();
    out.push_back(g);
    return;
  }
  if (f.degree() <= 0) return;
  int64_t ell = fd->ell;
  while (true) {
    Poly h = random_poly(fd, f.degree(), rng);
    if (h.is_zero()) continue;
    Poly g(fd);
    if (ell == 2) {
      // trace map over F_2: sum of h^(2^i), i < d*dd
      Poly t(fd), cur = h % f;
      for (int i = 0; i < fd->degree * dd; ++i) {
        t = t + cur;
        cur = powmod(cur, 2, f);
      }
      g = gcd(t, f);
    } else {
      // s = h^(1 + q + ... + q^(dd-1)); then s^((q-1)/2) - 1
      Poly s = h % f;
      Poly acc = s;
      for (int i = 1; i < dd; ++i) {
        acc = frobenius_power_mod(acc, f);
        acc = (acc * s) % f;
      }
      uint64_t q = fd->order();
      Poly p = powmod(acc, (q - 1) / 2, f);
      g = gcd(p - Poly::one(fd), f);
    }
    if (g.degree() > 0 && g.degree() < f.degree()) {
      edf(g, dd, rng, out);
      edf(f / g, dd, rng, out);
      return;
    }
  }
}

}  // namespace detail

// Complete factorization of a monic polynomial; factors monic irreducible,
// sorted by (degree, coefficient sequence). Internal randomness is seeded
// per call so output is reproducible.
inline std::vector<std::pair<Poly, int>> factor_poly(const Poly& p) {
  if (p.is_zero()) throw InputError("factor_poly: zero polynomial");
  if (p.degree() < 1) throw InputError("factor_poly: constant polynomial");
  if (!p.is_monic()) throw InputError("factor_poly: polynomial must be monic");
  std::mt19937_64 rng(0x6d73662d66616374ULL);
  std::vector<std::pair<Poly, int>> out;
  for (auto& [sqf, mult] : detail::squarefree_decompose(p)) {
    for (auto& [prod, dd] : detail::ddf(sqf)) {
      std::vector<Poly> irr;
      detail::edf(prod, dd, rng, irr);
      for (auto& g : irr) out.emplace_back(g, mult);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (!(a.first == b.first)) return a.first < b.first;
    return a.second < b.second;
  });
  return out;
}

// Roots of p in its coefficient field, each with multiplicity, sorted.
inline std::vector<std::pair<FieldElement, int>> poly_roots(const Poly& p) {
  std::vector<std::pair<FieldElement, int>> out;
  Poly q = p;
  q.make_monic();
  for (auto& [g, m] : factor_poly(q)) {
    if (g.degree() == 1) out.emplace_back(-g.coeff(0), m);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

// Minimal polynomial of w over the prime field, as an integer coefficient
// sequence (constant first). Product over the Frobenius orbit of w.
inline std::vector<int64_t> minpoly_over_prime(const FieldElement& w) {
  FieldRef f = w.field();
  std::vector<FieldElement> orbit{w};
  FieldElement cur = frobenius(w);
  while (!(cur == w)) {
    orbit.push_back(cur);
    cur = frobenius(cur);
  }
  Poly m = Poly::one(f);
  for (auto& r : orbit) m = m * Poly(f, {-r, FieldElement(f, 1)});
  std::vector<int64_t> out;
  for (int i = 0; i <= m.degree(); ++i) {
    FieldElement c = m.coeff(i);
    for (size_t j = 1; j < c.coeffs().size(); ++j)
      if (c.coeffs()[j] != 0) throw InternalError("minpoly coefficients not in prime field");
    out.push_back(static_cast<int64_t>(c.coeffs()[0]));
  }
  return out;
}

inline uint64_t multiplicative_order(const FieldElement& x) {
  FieldRef f = x.field();
  uint64_t q1 = f->order() - 1;
  uint64_t ord = q1;
  for (int64_t t : prime_divisors(static_cast<int64_t>(q1))) {
    while (ord % static_cast<uint64_t>(t) == 0 &&
           x.pow(ord / static_cast<uint64_t>(t)) == FieldElement(f, 1))
      ord /= static_cast<uint64_t>(t);
  }
  return ord;
}

// Canonical primitive element of F_{ell^d}: the lexicographically smallest
// generator of the multiplicative group whose power-norms down to every
// proper subfield have the subfield generator's minimal polynomial. The
// norm condition is what makes the embeddings below compose along chains.
inline FieldElement canonical_generator(FieldRef f) {
  static std::map<FieldRef, FieldElement> cache;
  static std::mutex mu;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(f);
    if (it != cache.end()) return it->second;
  }

  // computed outside the lock: recursion only touches strictly smaller degrees
  std::vector<std::pair<int, std::vector<int64_t>>> sub_minpolys;
  for (int e = 1; e < f->degree; ++e) {
    if (f->degree % e != 0) continue;
    FieldRef sub = make_extension(f->ell, e);
    FieldElement g = canonical_generator(sub);
    sub_minpolys.emplace_back(e, minpoly_over_prime(g));
  }

  uint64_t q1 = f->order() - 1;
  std::vector<uint64_t> digits(f->degree, 0);
  while (true) {
    // advance lexicographically, constant coefficient most significant
    FieldElement cand(f, std::vector<uint64_t>(digits.rbegin(), digits.rend()));
    bool ok = !cand.is_zero() && multiplicative_order(cand) == q1;
    if (ok) {
      for (auto& [e, mp] : sub_minpolys) {
        uint64_t sub_q1 = 1;
        for (int i = 0; i < e; ++i) sub_q1 *= static_cast<uint64_t>(f->ell);
        --sub_q1;
        FieldElement w = cand.pow(q1 / sub_q1);
        if (minpoly_over_prime(w) != mp) { ok = false; break; }
      }
    }
    if (ok) {
      std::lock_guard<std::mutex> lock(mu);
      cache.emplace(f, cand);
      return cand;
    }
    int pos = f->degree - 1;
    while (pos >= 0 && digits[pos] == static_cast<uint64_t>(f->ell) - 1) { digits[pos] = 0; --pos; }
    if (pos < 0) throw InternalError("no compatible primitive element found");
    ++digits[pos];
  }
}

// Ring embedding F_{ell^a} -> F_{ell^b} for a | b, fixing F_ell. The map
// sends the canonical generator g_a to g_b^((ell^b-1)/(ell^a-1)); embeddings
// built this way satisfy embed(embed(x, M), N) = embed(x, N) along divisor
// chains. The induced image of the power-basis root is cached per pair.
inline FieldElement embed(const FieldElement& x, FieldRef target) {
  FieldRef src = x.field();
  if (src == target) return x;
  if (src->ell != target->ell) throw InputError("embed: characteristic mismatch");
  if (target->degree % src->degree != 0) throw InputError("embed: incompatible degrees");
  if (src->prime_field()) {
    return FieldElement(target, static_cast<int64_t>(x.coeffs()[0]));
  }
  static std::map<std::pair<FieldRef, FieldRef>, FieldElement> root_cache;
  static std::mutex mu;
  FieldElement root(target, 0);
  bool have = false;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = root_cache.find({src, target});
    if (it != root_cache.end()) { root = it->second; have = true; }
  }
  if (!have) {
    FieldElement gs = canonical_generator(src);
    FieldElement gt = canonical_generator(target);
    uint64_t e = (target->order() - 1) / (src->order() - 1);
    FieldElement gs_image = gt.pow(e);
    // the power-basis root maps to the unique root of the source modulus
    // carrying gs to gs_image
    Poly mod_in_target = Poly::from_ints(target, src->modulus);
    auto roots = poly_roots(mod_in_target);
    if (roots.empty()) throw InternalError("embed: modulus has no root in target");
    bool found = false;
    for (auto& [rho, mult] : roots) {
      FieldElement img(target, 0);
      for (int i = src->degree - 1; i >= 0; --i)
        img = img * rho + FieldElement(target, static_cast<int64_t>(gs.coeffs()[i]));
      if (img == gs_image) { root = rho; found = true; break; }
    }
    if (!found) throw InternalError("embed: no root realizes the canonical generator image");
    std::lock_guard<std::mutex> lock(mu);
    root_cache.emplace(std::make_pair(src, target), root);
  }
  FieldElement acc(target, 0);
  for (int i = src->degree - 1; i >= 0; --i) {
    acc = acc * root + FieldElement(target, static_cast<int64_t>(x.coeffs()[i]));
  }
  return acc;
}

}  // namespace msf
