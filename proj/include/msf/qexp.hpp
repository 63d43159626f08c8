// Truncated q-expansions over finite fields and the level/weight-moving
// operators on them: the degeneracy maps B_d and alpha, Frobenius, Hasse
// multiplication, and the descent extracting g from a form supported on
// d-th powers of q.
#pragma once

#include "msf/heckedual.hpp"

namespace msf {

struct QExpansion {
  int64_t level = 1;
  int weight = 2;
  DirichletCharacter character;
  FieldRef field = nullptr;
  int precision = 0;                // B: coefficients a_1..a_B are stored
  std::vector<FieldElement> a;      // a[0] present but unused (cuspidal)

  QExpansion() = default;
  QExpansion(int64_t n, int k, DirichletCharacter eps, int B, FieldRef coeff_field = nullptr)
      : level(n), weight(k), character(std::move(eps)),
        field(coeff_field ? coeff_field : character.field()), precision(B),
        a(B + 1, FieldElement(field, 0)) {}

  FieldElement coeff(int64_t m) const {
    if (m < 1 || m > precision) throw InputError("coefficient index out of range");
    return a[m];
  }

  friend bool operator==(const QExpansion& x, const QExpansion& y) {
    return x.level == y.level && x.weight == y.weight && x.precision == y.precision &&
           x.a == y.a;
  }

  QExpansion operator+(const QExpansion& o) const {
    QExpansion r = *this;
    if (o.precision != precision || o.field != field)
      throw InputError("expansion shape mismatch");
    for (int m = 1; m <= precision; ++m) r.a[m] = r.a[m] + o.a[m];
    return r;
  }
  QExpansion operator-(const QExpansion& o) const {
    QExpansion r = *this;
    if (o.precision != precision || o.field != field)
      throw InputError("expansion shape mismatch");
    for (int m = 1; m <= precision; ++m) r.a[m] = r.a[m] - o.a[m];
    return r;
  }
  QExpansion operator*(const FieldElement& s) const {
    QExpansion r = *this;
    for (int m = 1; m <= precision; ++m) r.a[m] = r.a[m] * s;
    return r;
  }
  bool is_zero() const {
    for (int m = 1; m <= precision; ++m)
      if (!a[m].is_zero()) return false;
    return true;
  }
};

// B_d: a_j(out) = a_{j/d}(g) when d | j, else 0; level multiplied by d,
// weight kept, character viewed at the larger modulus.
inline QExpansion degeneracy_b(const QExpansion& g, int64_t d) {
  if (d < 1) throw InputError("degeneracy: d must be positive");
  QExpansion out(g.level * d, g.weight, extend_character(g.character, g.level * d),
                 g.precision, g.field);
  for (int64_t j = d; j <= g.precision; j += d) out.a[j] = g.a[j / d];
  return out;
}

// alpha: coefficients unchanged, level multiplied by d.
inline QExpansion degeneracy_alpha(const QExpansion& g, int64_t d) {
  if (d < 1) throw InputError("degeneracy: d must be positive");
  QExpansion out(g.level * d, g.weight, extend_character(g.character, g.level * d),
                 g.precision, g.field);
  out.a = g.a;
  return out;
}

// Frobenius on forms: a_{ell*j}(out) = a_j(g)^ell, weight multiplied by ell,
// precision scaled accordingly.
inline QExpansion frobenius_form(const QExpansion& g) {
  int64_t ell = g.field->ell;
  QExpansion out(g.level, static_cast<int>(g.weight * ell), g.character,
                 static_cast<int>(g.precision * ell), g.field);
  for (int64_t j = 1; j <= g.precision; ++j)
    out.a[ell * j] = g.a[j].pow(static_cast<uint64_t>(ell));
  return out;
}

// multiplication by the Hasse invariant: coefficients unchanged, weight + (ell-1)
inline QExpansion hasse_mult(const QExpansion& g) {
  QExpansion out = g;
  out.weight += static_cast<int>(g.field->ell) - 1;
  return out;
}

struct DescendResult {
  bool ok = false;
  int64_t offending_index = 0;  // first index with d-divisibility violated
  QExpansion form;
};

// Inverse of B_d on expansions: succeeds when the support lies in d-th
// powers; the membership of the result in the smaller cuspform space is
// checked by the caller against an independently computed basis.
inline DescendResult descend(const QExpansion& f, int64_t d) {
  if (d < 1) throw InputError("descend: d must be positive");
  if (f.level % d != 0) throw InputError("descend: d does not divide the level");
  DescendResult res;
  for (int64_t j = 1; j <= f.precision; ++j) {
    if (j % d != 0 && !f.a[j].is_zero()) {
      res.ok = false;
      res.offending_index = j;
      return res;
    }
  }
  int64_t m = f.level / d;
  QExpansion out(m, f.weight, restrict_character(f.character, m), f.precision / d, f.field);
  for (int64_t j = 1; j <= out.precision; ++j) out.a[j] = f.a[j * d];
  res.ok = true;
  res.form = std::move(out);
  return res;
}

// Basis of the cuspform space as q-expansions to precision B, echelonized by
// leading exponent. Empty for the zero space.
inline std::vector<QExpansion> qexp_basis(const ModSymSpace& S, int B, HeckeDual* dual = nullptr) {
  if (B < 1) throw InputError("qexp_basis: precision must be >= 1");
  if (S.zero_space || S.cuspidal.dim() == 0) return {};
  std::unique_ptr<HeckeDual> own;
  if (!dual) {
    own = std::make_unique<HeckeDual>(S, B);
    dual = own.get();
  }
  if (dual->index_bound() < B) throw InputError("qexp_basis: dual index bound too small");
  std::vector<QExpansion> out;
  for (auto& row : dual->expansion_basis(B)) {
    QExpansion q(S.level, S.weight, S.eps, B);
    q.a = row;
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace msf
