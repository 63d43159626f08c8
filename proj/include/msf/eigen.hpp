// Mod-ell eigenvalue systems on a cuspidal space: simultaneous eigenvalue
// packets over minimal extensions, with symbol-side multiplicities and
// Frobenius-conjugacy deduplication.
//
// Enumeration runs on the Hecke algebra itself (the dual module of
// heckedual.hpp): eigenfunctionals of the regular representation are exactly
// the normalized eigenforms, and the algebra has half the dimension of the
// cuspidal symbol space.
#pragma once

#include "msf/qexp.hpp"

namespace msf {

struct EigenSystem {
  int64_t level = 1;
  int weight = 2;
  int64_t ell = 2;
  DirichletCharacter character;
  FieldRef field = nullptr;             // F_{ell^d} with d minimal for the packet
  std::map<int64_t, FieldElement> ap;   // prime -> eigenvalue
  int64_t bound = 0;                    // primes <= bound are stored
  int multiplicity = 0;                 // joint eigenspace dim on the symbol side
  bool generalized_gap = false;         // joint generalized space is strictly bigger

  int degree() const { return field ? field->degree : 1; }

  std::vector<FieldElement> packet_key() const {
    std::vector<FieldElement> key;
    for (auto& [p, v] : ap) key.push_back(v);
    return key;
  }
};

namespace detail {

inline bool packet_less(const std::vector<FieldElement>& a,
                        const std::vector<FieldElement>& b) {
  for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return a.size() < b.size();
}

// preimage of x under embed(small -> big); throws if x is not in the image
inline FieldElement embed_preimage(const FieldElement& x, FieldRef small) {
  FieldRef big = x.field();
  if (small == big) return x;
  // solve the F_ell-linear system: embed is linear in the coefficients
  int ds = small->degree, db = big->degree;
  Matrix emb(make_extension(big->ell, 1), db, ds);
  for (int i = 0; i < ds; ++i) {
    std::vector<uint64_t> e(ds, 0);
    e[i] = 1;
    FieldElement img = embed(FieldElement(small, e), big);
    for (int j = 0; j < db; ++j) emb.set_int(j, i, static_cast<int64_t>(img.coeffs()[j]));
  }
  // x = emb * c: solve the db x ds system by echelon
  FieldRef fp = make_extension(big->ell, 1);
  Matrix aug(fp, db, ds + 1);
  for (int j = 0; j < db; ++j) {
    for (int i = 0; i < ds; ++i) aug.set(j, i, emb.get(j, i));
    aug.set_int(j, ds, static_cast<int64_t>(x.coeffs()[j]));
  }
  rref_in_place(aug);
  std::vector<uint64_t> c(ds, 0);
  for (int r = 0; r < db; ++r) {
    int lead = -1;
    for (int i = 0; i <= ds; ++i)
      if (!aug.get(r, i).is_zero()) { lead = i; break; }
    if (lead < 0) continue;
    if (lead == ds) throw InternalError("embed_preimage: element not in subfield");
    c[lead] = aug.get(r, ds).coeffs()[0];
  }
  FieldElement out(small, std::vector<uint64_t>(c));
  if (!(embed(out, big) == x)) throw InternalError("embed_preimage: verification failed");
  return out;
}

}  // namespace detail

// Hecke application for rows over an extension of the space's field: the
// streamed coefficients are embedded on the fly.
inline Matrix hecke_apply_ext(const ModSymSpace& S, int64_t p, const Matrix& rows) {
  FieldRef ext = rows.field();
  if (ext == S.field) return hecke_apply(S, p, rows);
  if (rows.cols() != S.dim) throw InputError("hecke_apply_ext: shape mismatch");
  FieldRef f = ext;
  int s = rows.rows();
  if (S.dim == 0 || s == 0) return Matrix(f, s, S.dim);
  int k = S.weight;
  std::vector<FieldElement> eps_emb;
  for (auto& v : S.eps_table) eps_emb.push_back(embed(v, ext));
  Matrix acc_rep(f, s, S.num_rep_cols);
  std::vector<FieldElement> gen_scal_emb;
  gen_scal_emb.reserve(S.gen_scal.size());
  for (auto& v : S.gen_scal) gen_scal_emb.push_back(embed(v, ext));
  uint64_t prod[FieldDescriptor::kMaxDegree];
  std::vector<int> support;
  for (int j = 0; j < S.dim; ++j) {
    bool nz = false;
    for (int r = 0; r < s && !nz; ++r) nz = !f->is_zero(rows.at(r, j));
    if (nz) support.push_back(j);
  }
  const std::vector<std::vector<int64_t>> pm_trivial{{1 % f->ell}};
  heilbronn_cremona(p, [&](int64_t a, int64_t b, int64_t c, int64_t d) {
    const auto pm = (k == 2) ? pm_trivial : detail::poly_action_table(a, b, c, d, k, f->ell);
    for (int j : support) {
      auto [mono, pt] = S.basis_gens[j];
      auto [u, v] = S.p1->point(pt);
      int64_t lambda;
      int32_t idx = S.p1->lookup(u * a + v * c, u * b + v * d, lambda);
      if (idx < 0) continue;
      FieldElement base = (S.level == 1) ? FieldElement(f, 1)
                                         : eps_emb[mod_pos(lambda, S.level)];
      if (base.is_zero()) continue;
      for (int i2 = 0; i2 <= k - 2; ++i2) {
        int64_t m = pm[mono][i2];
        if (m == 0) continue;
        int64_t g2 = S.gen_index(i2, idx);
        int32_t col = S.root_col[S.gen_root[g2]];
        if (col < 0) continue;
        FieldElement coeff = base * gen_scal_emb[g2] * FieldElement(f, m);
        if (coeff.is_zero()) continue;
        for (int r = 0; r < s; ++r) {
          f->mul(prod, coeff.data(), rows.at(r, j));
          f->add(acc_rep.at(r, col), acc_rep.at(r, col), prod);
        }
      }
    }
  });
  return acc_rep * S.rep_rows.base_change(ext);
}

// Symbol-side joint eigenspace of a packet: refine the cuspidal subspace by
// each prime up to the bound using streamed applications.
inline std::pair<int, bool> symbol_multiplicity(const ModSymSpace& S,
                                                const std::map<int64_t, FieldElement>& ap,
                                                FieldRef ext) {
  Subspace W = S.cuspidal.base_change(ext);
  bool gap = false;
  for (auto& [p, lambda] : ap) {
    if (W.dim() == 0) break;
    // images of W's basis under T_p, in W-coordinates
    Matrix lifted = W.basis().base_change(ext);
    Matrix img = hecke_apply_ext(S, p, lifted);
    Matrix X(ext, W.dim(), W.dim());
    for (int i = 0; i < W.dim(); ++i) {
      Matrix row(ext, 1, S.dim);
      std::copy(img.row(i), img.row(i) + static_cast<size_t>(S.dim) * ext->degree, row.row(0));
      auto coords = W.coordinates(row);
      for (int j = 0; j < W.dim(); ++j) X.set(i, j, coords[j]);
    }
    Matrix shift = X - Matrix::scalar(ext, W.dim(), lambda);
    Subspace kd = kernel(shift);
    if (kd.dim() < W.dim()) {
      // re-express in ambient coordinates and continue
      Matrix new_basis = kd.basis() * W.basis().base_change(ext);
      Subspace W2 = Subspace::from_rows(std::move(new_basis));
      // generalized gap visible if the shift is nilpotent-but-nonzero here
      Subspace kd2 = kernel_power(shift, W.dim());
      if (kd2.dim() > kd.dim()) gap = true;
      W = std::move(W2);
    }
  }
  return {W.dim(), gap};
}

// Complete list of simultaneous eigenvalue systems for {T_p : p <= bound}
// on the cuspidal subspace, deduplicated up to Frobenius conjugacy. Systems
// needing extensions beyond max_degree are skipped and reported via caveats.
inline std::vector<EigenSystem> enumerate_systems(const ModSymSpace& S, HeckeDual& dual,
                                                  int64_t bound, int max_degree = 8,
                                                  std::vector<Caveat>* caveats = nullptr) {
  int64_t sturm = sturm_bound(S.level, S.weight, GroupKind::Gamma0);
  if (bound < sturm) throw InputError("bound below Sturm");
  if (bound > dual.index_bound()) throw InputError("bound exceeds dual index bound");
  std::vector<EigenSystem> out;
  if (dual.dim() == 0) return out;
  FieldRef base = S.field;
  auto primes = primes_up_to(bound);

  // transposed multiplication matrices: eigenfunctional rows are kernels of
  // sigma_p - a_p with sigma_p = tau_p^T
  std::map<int64_t, Matrix> sigma;
  for (int64_t p : primes) sigma.emplace(p, dual.tau_prime(p).transpose());

  // stage 1: refine over the base field by irreducible charpoly factors
  std::vector<Subspace> leaves{Subspace::full(base, dual.dim())};
  for (int64_t p : primes) {
    std::vector<Subspace> next;
    for (auto& node : leaves) {
      if (node.dim() == 0) continue;
      if (node.dim() == 1) { next.push_back(node); continue; }
      Matrix X = restrict_to(sigma.at(p), node);
      Poly cp = charpoly(X);
      for (auto& [fac, mult] : factor_poly(cp)) {
        // kernel of fac(X) inside the node
        Matrix fx(base, node.dim(), node.dim());
        for (int i = fac.degree(); i >= 0; --i) {
          fx = fx * X;
          fx = fx + Matrix::scalar(base, node.dim(), fac.coeff(i));
        }
        Subspace kd = kernel(fx);
        if (kd.dim() == 0) continue;
        Matrix emb_basis = kd.basis() * node.basis();
        next.push_back(Subspace::from_rows(std::move(emb_basis)));
      }
    }
    leaves = std::move(next);
  }

  // stage 2: split each leaf over extensions and read off the packets
  int64_t skipped_dim = 0;
  for (auto& leaf : leaves) {
    std::vector<Matrix> ops;
    for (int64_t p : primes) ops.push_back(restrict_to(sigma.at(p), leaf));
    std::vector<EigenPiece> pieces;
    try {
      pieces = simultaneous_eigenspaces(ops, Subspace::full(base, leaf.dim()), max_degree);
    } catch (const InputError&) {
      throw InternalError("Hecke operators failed to commute on the dual algebra");
    }
    int64_t found_dim = 0;
    for (auto& piece : pieces) found_dim += piece.space.dim();
    if (found_dim < leaf.dim()) skipped_dim += leaf.dim() - found_dim;
    for (auto& piece : pieces) {
      EigenSystem sys;
      sys.level = S.level;
      sys.weight = S.weight;
      sys.ell = base->ell;
      sys.character = S.eps;
      // minimal field: compress to the subfield generated by the packet
      // (enlarged to contain the character values so composite eigenvalues
      // stay inside)
      int d_full = piece.ext_degree;
      int d_min = 1;
      for (; d_min <= d_full; ++d_min) {
        if (d_full % d_min != 0) continue;
        bool fixed = true;
        for (auto& v : piece.eigenvalues) {
          FieldElement w = v;
          for (int i = 0; i < d_min; ++i) w = frobenius(w);
          if (!(w == v)) { fixed = false; break; }
        }
        if (fixed) break;
      }
      d_min = static_cast<int>(std::lcm(d_min, base->degree));
      FieldRef fmin = make_extension(base->ell, d_min);
      sys.field = fmin;
      sys.bound = bound;
      for (size_t i = 0; i < primes.size(); ++i)
        sys.ap.emplace(primes[i], d_min == d_full
                                      ? piece.eigenvalues[i]
                                      : detail::embed_preimage(piece.eigenvalues[i], fmin));
      out.push_back(std::move(sys));
    }
  }
  if (skipped_dim > 0 && caveats)
    caveats->push_back({"enumeration-degree-capped",
                        "systems spanning dimension " + std::to_string(skipped_dim) +
                            " need extensions beyond degree " + std::to_string(max_degree)});

  // Frobenius dedup: canonical representative is the lex-smallest conjugate
  for (auto& sys : out) {
    std::map<int64_t, FieldElement> best = sys.ap;
    std::map<int64_t, FieldElement> cur = sys.ap;
    for (int i = 1; i < sys.degree(); ++i) {
      for (auto& [p, v] : cur) v = frobenius(v);
      std::vector<FieldElement> ck, bk;
      for (auto& [p, v] : cur) ck.push_back(v);
      for (auto& [p, v] : best) bk.push_back(v);
      if (detail::packet_less(ck, bk)) best = cur;
    }
    sys.ap = std::move(best);
  }
  std::sort(out.begin(), out.end(), [](const EigenSystem& a, const EigenSystem& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return detail::packet_less(a.packet_key(), b.packet_key());
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const EigenSystem& a, const EigenSystem& b) {
                          return a.degree() == b.degree() && a.packet_key() == b.packet_key();
                        }),
            out.end());

  // symbol-side multiplicities
  for (auto& sys : out) {
    auto [mult, gap] = symbol_multiplicity(S, sys.ap, sys.field);
    sys.multiplicity = mult;
    sys.generalized_gap = gap;
    if (mult == 0)
      throw InternalError("enumerated system has empty symbol-side eigenspace");
  }
  return out;
}

inline std::vector<EigenSystem> enumerate_systems(const ModSymSpace& S, int64_t bound,
                                                  int max_degree = 8,
                                                  std::vector<Caveat>* caveats = nullptr) {
  HeckeDual dual(S, bound);
  return enumerate_systems(S, dual, bound, max_degree, caveats);
}

// a_m assembled from the stored prime eigenvalues by multiplicativity and
// the p-power recurrence a_{p^{e+1}} = a_p a_{p^e} - p^{k-1} eps(p) a_{p^{e-1}}.
inline FieldElement eigenvalue_of(const EigenSystem& sys, int64_t m) {
  if (m < 1) throw InputError("eigenvalue_of: index must be positive");
  FieldRef f = sys.field;
  FieldElement out(f, 1);
  for (auto& [p, e] : factorize(m)) {
    auto it = sys.ap.find(p);
    if (it == sys.ap.end()) throw InputError("prime divisor beyond bound");
    FieldElement app = it->second;
    FieldElement prev(f, 1), cur = app;
    if (sys.level % p == 0) {
      cur = app;
      for (int i = 1; i < e; ++i) cur = cur * app;
    } else {
      FieldElement pk = FieldElement(f, pow_mod(p, static_cast<uint64_t>(sys.weight - 1),
                                                f->ell));
      FieldElement epsp = embed(sys.character(p), f);
      for (int i = 1; i < e; ++i) {
        FieldElement next = app * cur - pk * epsp * prev;
        prev = cur;
        cur = next;
      }
    }
    if (e > 0) out = out * cur;
  }
  return out;
}

// normalized eigenform expansion assembled from the packet
inline QExpansion expansion_from_system(const EigenSystem& sys, int B) {
  DirichletCharacter chi = sys.character;
  QExpansion q(sys.level, sys.weight, chi, B);
  q.field = sys.field;
  q.a.assign(B + 1, FieldElement(sys.field, 0));
  for (int64_t m = 1; m <= B; ++m) q.a[m] = eigenvalue_of(sys, m);
  return q;
}

// true iff the packets agree at every prime p <= min(bounds) with p != r,
// allowing any Frobenius conjugation of s2 after embedding both into the
// compositum
inline bool systems_match_away_from(const EigenSystem& s1, const EigenSystem& s2, int64_t r) {
  if (s1.ell != s2.ell) throw InputError("characteristic mismatch");
  int64_t bound = std::min(s1.bound, s2.bound);
  int dd = std::lcm(s1.degree(), s2.degree());
  FieldRef big = make_extension(s1.ell, dd);
  for (int j = 0; j < s2.degree(); ++j) {
    bool ok = true;
    for (auto& [p, v1] : s1.ap) {
      if (p > bound || p == r) continue;
      auto it = s2.ap.find(p);
      if (it == s2.ap.end()) continue;
      FieldElement w = it->second;
      for (int i = 0; i < j; ++i) w = frobenius(w);
      if (!(embed(v1, big) == embed(w, big))) { ok = false; break; }
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace msf
