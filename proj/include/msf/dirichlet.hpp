// Dirichlet characters (Z/nZ)* -> F_{ell^d}*.
//
// The unit group is presented by CRT-factored cyclic generators with
// smallest-integer representatives; a character stores one image per
// generator. Conductors are computed from the factor data, never asserted.
#pragma once

#include "msf/linalg.hpp"

#include <set>
#include <sstream>

namespace msf {

namespace detail {

// smallest primitive root modulo p^e (p odd prime)
inline int64_t primitive_root(int64_t pe, int64_t phi) {
  auto prime_facs = prime_divisors(phi);
  for (int64_t g = 2; g < pe; ++g) {
    if (gcd_i64(g, pe) != 1) continue;
    bool ok = true;
    for (int64_t q : prime_facs)
      if (pow_mod(g, static_cast<uint64_t>(phi / q), pe) == 1) { ok = false; break; }
    if (ok) return g;
  }
  throw InternalError("no primitive root found");
}

}  // namespace detail

// One cyclic factor of (Z/nZ)*: the subgroup generated by `gen` inside the
// units of p^e, with the given order. For p = 2, e >= 3 there are two
// factors (gen -1 and gen 5).
struct UnitFactor {
  int64_t prime_power;  // p^e
  int64_t gen;          // generator residue mod p^e
  int64_t order;
};

inline std::vector<UnitFactor> unit_group_factors(int64_t n) {
  std::vector<UnitFactor> out;
  for (auto& [p, e] : factorize(n)) {
    int64_t pe = 1;
    for (int i = 0; i < e; ++i) pe *= p;
    if (p == 2) {
      if (e == 1) continue;  // trivial group
      if (e == 2) {
        out.push_back({pe, 3, 2});  // -1 mod 4
      } else {
        out.push_back({pe, pe - 1, 2});
        out.push_back({pe, 5, pe / 4});
      }
    } else {
      int64_t phi = pe / p * (p - 1);
      out.push_back({pe, detail::primitive_root(pe, phi), phi});
    }
  }
  return out;
}

class DirichletCharacter {
 public:
  DirichletCharacter() : modulus_(1), field_(nullptr) {}

  static DirichletCharacter trivial(int64_t n, FieldRef field) {
    DirichletCharacter chi;
    chi.modulus_ = n;
    chi.field_ = field;
    chi.factors_ = unit_group_factors(n);
    chi.images_.assign(chi.factors_.size(), FieldElement(field, 1));
    chi.build_tables();
    return chi;
  }

  DirichletCharacter(int64_t n, FieldRef field, std::vector<FieldElement> images)
      : modulus_(n), field_(field), factors_(unit_group_factors(n)), images_(std::move(images)) {
    if (images_.size() != factors_.size())
      throw InputError("character: wrong number of generator images");
    for (size_t i = 0; i < factors_.size(); ++i) {
      if (images_[i].field() != field_) throw InputError("character image field mismatch");
      if (!(images_[i].pow(static_cast<uint64_t>(factors_[i].order)) == FieldElement(field_, 1)))
        throw InputError("character image order incompatible with generator");
    }
    build_tables();
  }

  int64_t modulus() const { return modulus_; }
  FieldRef field() const { return field_; }
  const std::vector<UnitFactor>& factors() const { return factors_; }
  const std::vector<FieldElement>& images() const { return images_; }

  bool is_trivial() const {
    for (auto& im : images_)
      if (!(im == FieldElement(field_, 1))) return false;
    return true;
  }

  // 0 on non-units
  FieldElement operator()(int64_t a) const {
    a = mod_pos(a, modulus_ == 1 ? 1 : modulus_);
    if (modulus_ == 1) return FieldElement(field_, 1);
    if (gcd_i64(a, modulus_) != 1) return FieldElement(field_, 0);
    FieldElement v(field_, 1);
    for (size_t i = 0; i < factors_.size(); ++i) {
      int64_t exp = dlog_[i].at(a % factors_[i].prime_power);
      if (exp) v = v * images_[i].pow(static_cast<uint64_t>(exp));
    }
    return v;
  }

  int64_t order() const {
    int64_t o = 1;
    for (size_t i = 0; i < images_.size(); ++i)
      o = std::lcm(o, static_cast<int64_t>(multiplicative_order_or_one(images_[i])));
    return o;
  }

  // sign of the character: value at -1
  bool is_even() const { return (*this)(modulus_ - 1) == FieldElement(field_, 1); }

  int64_t conductor() const {
    int64_t c = 1;
    // group factors by prime power
    std::map<int64_t, std::vector<size_t>> by_pp;
    for (size_t i = 0; i < factors_.size(); ++i) by_pp[factors_[i].prime_power].push_back(i);
    for (auto& [pe, idxs] : by_pp) {
      int64_t p = factorize(pe)[0].first;
      if (p == 2) {
        bool minus_triv = true;
        int64_t five_ord = 1;
        for (size_t i : idxs) {
          if (factors_[i].gen == pe - 1 || factors_[i].gen == 3)
            minus_triv = images_[i] == FieldElement(field_, 1);
          else
            five_ord = static_cast<int64_t>(multiplicative_order_or_one(images_[i]));
        }
        if (five_ord > 1) {
          // chi(5) of order 2^t needs modulus 2^(t+2)
          c *= 4 * five_ord;
        } else if (!minus_triv) {
          c *= 4;
        }
      } else {
        size_t i = idxs[0];
        int64_t o = static_cast<int64_t>(multiplicative_order_or_one(images_[i]));
        if (o == 1) continue;
        int64_t pc = p;
        int64_t phi = p - 1;
        while (phi % o != 0) { pc *= p; phi *= p; }
        c *= pc;
      }
    }
    return c;
  }

  friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
    return a.modulus_ == b.modulus_ && a.field_ == b.field_ && a.images_ == b.images_;
  }

  // "trivial" or "n.d:e1,e2,..." with e_i the exponent of each generator
  // image with respect to the canonical generator of the field
  std::string label() const {
    if (is_trivial()) return "trivial";
    std::ostringstream os;
    os << modulus_ << "." << field_->degree << ":";
    FieldElement g = canonical_generator(field_);
    for (size_t i = 0; i < images_.size(); ++i) {
      if (i) os << ",";
      os << dlog_base(g, images_[i]);
    }
    return os.str();
  }

  static DirichletCharacter parse_label(const std::string& label, int64_t n, int64_t ell) {
    if (label == "trivial" || label.empty())
      return trivial(n, make_extension(ell, 1));
    auto dot = label.find('.');
    auto colon = label.find(':');
    if (dot == std::string::npos || colon == std::string::npos || colon < dot)
      throw InputError("bad character label: " + label);
    int64_t ln = std::stoll(label.substr(0, dot));
    int deg = std::stoi(label.substr(dot + 1, colon - dot - 1));
    if (ln != n) throw InputError("character label modulus does not match level");
    FieldRef f = make_extension(ell, deg);
    FieldElement g = canonical_generator(f);
    std::vector<FieldElement> images;
    std::string rest = label.substr(colon + 1);
    std::istringstream is(rest);
    std::string tok;
    while (std::getline(is, tok, ','))
      images.push_back(g.pow(static_cast<uint64_t>(std::stoull(tok))));
    return DirichletCharacter(n, f, std::move(images));
  }

 private:
  static uint64_t multiplicative_order_or_one(const FieldElement& x) {
    if (x == FieldElement(x.field(), 1)) return 1;
    return multiplicative_order(x);
  }
  static int64_t dlog_base(const FieldElement& g, const FieldElement& x) {
    FieldElement cur(g.field(), 1);
    uint64_t q1 = g.field()->order() - 1;
    for (uint64_t k = 0; k < q1; ++k) {
      if (cur == x) return static_cast<int64_t>(k);
      cur = cur * g;
    }
    throw InternalError("dlog: element not in generated group");
  }

  void build_tables() {
    dlog_.clear();
    for (auto& fac : factors_) {
      std::map<int64_t, int64_t> table;
      int64_t cur = 1;
      for (int64_t k = 0; k < fac.order; ++k) {
        if (!table.count(cur)) table[cur] = k;
        cur = (cur * fac.gen) % fac.prime_power;
      }
      dlog_.push_back(std::move(table));
    }
    // for 2^e with e >= 3 the two factors do not jointly cover residues via
    // independent walks; fix up by composing the two generators
    std::map<int64_t, std::vector<size_t>> by_pp;
    for (size_t i = 0; i < factors_.size(); ++i) by_pp[factors_[i].prime_power].push_back(i);
    for (auto& [pe, idxs] : by_pp) {
      if (idxs.size() != 2) continue;  // only the 2-adic case has two factors
      size_t i_minus = idxs[0], i_five = idxs[1];
      std::map<int64_t, int64_t>& tm = dlog_[i_minus];
      std::map<int64_t, int64_t>& tf = dlog_[i_five];
      tm.clear();
      tf.clear();
      int64_t minus_one = factors_[i_minus].gen, five = factors_[i_five].gen;
      for (int64_t s = 0; s < 2; ++s) {
        for (int64_t t = 0; t < factors_[i_five].order; ++t) {
          int64_t r = pow_mod(minus_one, static_cast<uint64_t>(s), pe) *
                      pow_mod(five, static_cast<uint64_t>(t), pe) % pe;
          tm[r] = s;
          tf[r] = t;
        }
      }
    }
  }

  int64_t modulus_;
  FieldRef field_;
  std::vector<UnitFactor> factors_;
  std::vector<FieldElement> images_;
  std::vector<std::map<int64_t, int64_t>> dlog_;
};

// unit mod n congruent to fac.gen mod fac.prime_power and 1 elsewhere
inline int64_t crt_unit_lift(const UnitFactor& fac, int64_t n) {
  int64_t p = factorize(fac.prime_power)[0].first;
  int64_t pn = 1, rest = n;
  while (rest % p == 0) { rest /= p; pn *= p; }
  if (rest == 1) return mod_pos(fac.gen, n);
  int64_t r1, r2;
  ext_gcd(pn, rest, r1, r2);
  __int128 acc = (__int128)mod_pos(fac.gen, pn) % n * rest % n * mod_pos(r2, n) % n +
                 (__int128)pn * mod_pos(r1, n) % n;
  return mod_pos(static_cast<int64_t>(acc % n), n);
}

// Character mod m agreeing with eps on units; requires m | modulus and
// conductor(eps) | m.
inline DirichletCharacter restrict_character(const DirichletCharacter& eps, int64_t m) {
  int64_t n = eps.modulus();
  if (n % m != 0) throw InputError("restrict_character: m does not divide modulus");
  if (m % eps.conductor() != 0) throw InputError("character does not descend");
  if (m == n) return eps;
  auto m_factors = unit_group_factors(m);
  std::vector<FieldElement> images;
  // lift each generator of (Z/m)* to a unit mod n congruent to it at p and
  // to 1 elsewhere; the value is lift-independent because conductor | m
  for (auto& fac : m_factors) images.push_back(eps(crt_unit_lift(fac, n)));
  return DirichletCharacter(m, eps.field(), std::move(images));
}

// Character mod n induced by eps (modulus m | n): value at u is eps(u mod m).
inline DirichletCharacter extend_character(const DirichletCharacter& eps, int64_t n) {
  int64_t m = eps.modulus();
  if (n % m != 0) throw InputError("extend_character: modulus does not divide n");
  if (m == n) return eps;
  auto n_factors = unit_group_factors(n);
  std::vector<FieldElement> images;
  for (auto& fac : n_factors) images.push_back(eps(crt_unit_lift(fac, n)));
  return DirichletCharacter(n, eps.field(), std::move(images));
}

// All characters mod n with values in extensions of F_ell, one representative
// per Frobenius-conjugacy orbit, with orbit sizes. Parity-unrestricted.
struct CharacterOrbit {
  DirichletCharacter rep;
  int orbit_size;
};

inline std::vector<CharacterOrbit> character_orbits(int64_t n, int64_t ell) {
  auto factors = unit_group_factors(n);
  // image orders must divide the prime-to-ell part of each generator order
  std::vector<int64_t> max_ord;
  for (auto& fac : factors) {
    int64_t o = fac.order;
    while (o % ell == 0) o /= ell;
    max_ord.push_back(o);
  }
  // enumerate exponent tuples e_i in [0, max_ord_i)
  std::vector<int64_t> e(factors.size(), 0);
  std::vector<std::vector<int64_t>> seen_tuples;
  std::vector<CharacterOrbit> out;
  auto advance = [&]() {
    for (size_t i = 0; i < e.size(); ++i) {
      if (++e[i] < max_ord[i]) return true;
      e[i] = 0;
    }
    return false;
  };
  if (factors.empty()) {
    out.push_back({DirichletCharacter::trivial(n, make_extension(ell, 1)), 1});
    return out;
  }
  std::set<std::vector<int64_t>> handled;
  do {
    if (handled.count(e)) continue;
    // Frobenius orbit of the tuple: e -> ell*e (componentwise mod max_ord)
    std::vector<std::vector<int64_t>> orbit;
    std::vector<int64_t> cur = e;
    do {
      orbit.push_back(cur);
      for (size_t i = 0; i < cur.size(); ++i) cur[i] = (cur[i] * ell) % max_ord[i];
    } while (cur != e);
    std::vector<int64_t> rep = *std::min_element(orbit.begin(), orbit.end());
    for (auto& t : orbit) handled.insert(t);
    // build the character for the representative tuple
    int64_t value_order = 1;
    for (size_t i = 0; i < rep.size(); ++i) {
      if (rep[i] == 0) continue;
      value_order = std::lcm(value_order, max_ord[i] / gcd_i64(max_ord[i], rep[i]));
    }
    // minimal field degree: multiplicative order of ell mod value_order
    int deg = 1;
    if (value_order > 1) {
      int64_t cur_pow = ell % value_order;
      deg = 1;
      while (cur_pow != 1) { cur_pow = (cur_pow * ell) % value_order; ++deg; }
    }
    FieldRef f = make_extension(ell, deg);
    FieldElement g = canonical_generator(f);
    uint64_t q1 = f->order() - 1;
    std::vector<FieldElement> images;
    for (size_t i = 0; i < rep.size(); ++i) {
      // image of generator i: element of order max_ord_i / gcd
      if (rep[i] == 0) { images.emplace_back(f, 1); continue; }
      uint64_t exp = q1 / static_cast<uint64_t>(max_ord[i]) * static_cast<uint64_t>(rep[i]);
      images.push_back(g.pow(exp));
    }
    out.push_back({DirichletCharacter(n, f, std::move(images)),
                   static_cast<int>(orbit.size())});
  } while (advance());
  return out;
}

}  // namespace msf
