// The dual Hecke module of a cuspidal modular-symbol space.
//
// The Hecke algebra T acts faithfully on the cuspidal subspace C. Fixing a
// T-module generating tuple (y_1, ..., y_g) of C, T embeds into C^g via
// t -> (y_1 t, ..., y_g t); the image is computed for all T_m with m <= B0
// by streaming Heilbronn matrices for primes and the standard recurrences
// for composite indices. q-expansions of cuspforms are functionals on T:
// a_m(phi) = phi(T_m), which this class reads off in coordinates. For primes
// beyond B0 the element T_p of T is recovered exactly from its action on the
// probe tuple (T is spanned by T_m, m <= Sturm), giving eigenvalues and
// joint-kernel checks at arbitrary prime bounds without deep expansions.
#pragma once

#include "msf/msym.hpp"

namespace msf {

class HeckeDual {
 public:
  HeckeDual(const ModSymSpace& S, int64_t index_bound)
      : S_(&S), f_(S.field), B0_(index_bound) {
    if (S.zero_space || S.cuspidal.dim() == 0) {
      q_ = 0;
      return;
    }
    int64_t sturm = sturm_bound(S.level, S.weight, GroupKind::Gamma0);
    if (B0_ < sturm + 5) B0_ = sturm + 5;
    build();
  }

  const ModSymSpace& space() const { return *S_; }
  FieldRef field() const { return f_; }
  int64_t index_bound() const { return B0_; }
  int dim() const { return q_; }            // dim of the Hecke algebra
  int generators() const { return static_cast<int>(probe_.size()); }

  // coordinates of T_m in the echelon basis of T (length q)
  const std::vector<FieldElement>& beta(int64_t m) const {
    if (m < 1 || m > B0_) throw InputError("index beyond bound");
    return beta_[m];
  }

  // matrix (q x q) of multiplication by T_p on T in the echelon coordinates,
  // for primes p <= B0; cached
  const Matrix& tau_prime(int64_t p) {
    auto it = tau_.find(p);
    if (it != tau_.end()) return it->second;
    if (!is_prime(p) || p > B0_) throw InputError("tau_prime: bad prime");
    Matrix images(f_, q_, width());
    // blockwise application of T_p to the element basis rows
    for (int b = 0; b < generators(); ++b) {
      Matrix blk(f_, q_, S_->dim);
      for (int i = 0; i < q_; ++i)
        for (int j = 0; j < S_->dim; ++j)
          std::copy(ebasis_.at(i, b * S_->dim + j),
                    ebasis_.at(i, b * S_->dim + j) + f_->degree, blk.at(i, j));
      Matrix out = hecke_apply(*S_, p, blk);
      for (int i = 0; i < q_; ++i)
        for (int j = 0; j < S_->dim; ++j)
          std::copy(out.at(i, j), out.at(i, j) + f_->degree, images.at(i, b * S_->dim + j));
    }
    Matrix t(f_, q_, q_);
    for (int i = 0; i < q_; ++i) {
      Matrix row(f_, 1, width());
      std::copy(images.row(i), images.row(i) + static_cast<size_t>(width()) * f_->degree,
                row.row(0));
      auto coords = coordinates(row);
      for (int j = 0; j < q_; ++j) t.set(i, j, coords[j]);
    }
    return tau_.emplace(p, std::move(t)).first->second;
  }

  // index m whose u_m created echelon basis row i
  const std::vector<int64_t>& pivot_indices() const { return pivot_index_; }

  // T_p written in the spanning set {T_{m_i}} of pivot indices:
  // T_p = sum_i d_i T_{m_i}. Exact for any prime p (beyond B0 the element is
  // recovered from the probe image; the Sturm bound spans the algebra).
  std::vector<FieldElement> element_in_pivot_basis(int64_t p) {
    auto it = dvec_.find(p);
    if (it != dvec_.end()) return it->second;
    std::vector<FieldElement> gamma;
    if (p <= B0_) {
      gamma = beta_[p];
    } else {
      Matrix y = probe_image_prime(p);
      gamma = coordinates(y);
    }
    // beta_[m_i] is lower triangular in insertion order with nonzero diagonal:
    // solve d^T B = gamma^T by back substitution
    std::vector<FieldElement> d(q_, FieldElement(f_, 0));
    for (int j = q_ - 1; j >= 0; --j) {
      FieldElement acc = gamma[j];
      for (int i = j + 1; i < q_; ++i) acc = acc - d[i] * beta_[pivot_index_[i]][j];
      d[j] = acc * beta_[pivot_index_[j]][j].inverse();
    }
    dvec_.emplace(p, d);
    return d;
  }

  // expansion coefficients a_1..a_B of the functional phi given by its
  // values on the echelon basis of T (row of length q)
  std::vector<FieldElement> expansion(const Matrix& phi_row, int B) const {
    if (B > B0_) throw InputError("expansion precision beyond index bound");
    std::vector<FieldElement> a(B + 1, FieldElement(f_, 0));
    for (int64_t m = 1; m <= B; ++m) {
      FieldElement acc(f_, 0);
      for (int i = 0; i < q_; ++i) acc = acc + phi_row.get(0, i) * beta_[m][i];
      a[m] = acc;
    }
    return a;
  }

  // canonical echelonized q-expansion basis of the cuspform space, as rows
  // of coefficients a_1..a_B
  std::vector<std::vector<FieldElement>> expansion_basis(int B) {
    if (q_ == 0) return {};
    if (B > B0_) throw InputError("expansion precision beyond index bound");
    Matrix coeffs(f_, q_, B);
    for (int i = 0; i < q_; ++i)
      for (int64_t m = 1; m <= B; ++m) coeffs.set(i, static_cast<int>(m - 1), beta_[m][i]);
    rref_in_place(coeffs);
    std::vector<std::vector<FieldElement>> out;
    for (int i = 0; i < q_; ++i) {
      bool zero = true;
      for (int j = 0; j < B; ++j)
        if (!coeffs.get(i, j).is_zero()) { zero = false; break; }
      if (zero) continue;
      std::vector<FieldElement> row(B + 1, FieldElement(f_, 0));
      for (int j = 0; j < B; ++j) row[j + 1] = coeffs.get(i, j);
      out.push_back(std::move(row));
    }
    return out;
  }

 private:
  int width() const { return static_cast<int>(probe_.size()) * S_->dim; }

  // sparse probe rows: vectors in the cuspidal subspace supported on a small
  // window of quotient coordinates (the boundary map has few columns, so
  // every window of #classes + 1 coordinates meets C)
  std::vector<Matrix> sparse_cusp_vectors(int how_many) const {
    std::vector<Matrix> out;
    int D = S_->dim;
    int ncls = S_->boundary.cols();
    int w = std::min(D, ncls + 1);
    for (int start = 0; start + w <= D && static_cast<int>(out.size()) < how_many;
         ++start) {
      // kernel of the boundary restricted to the window
      Matrix sub(f_, w, ncls);
      for (int i = 0; i < w; ++i)
        for (int j = 0; j < ncls; ++j)
          std::copy(S_->boundary.at(start + i, j), S_->boundary.at(start + i, j) + f_->degree,
                    sub.at(i, j));
      Subspace k = kernel(sub);
      for (int r = 0; r < k.dim() && static_cast<int>(out.size()) < how_many; ++r) {
        Matrix v(f_, 1, D);
        for (int i = 0; i < w; ++i)
          std::copy(k.basis().at(r, i), k.basis().at(r, i) + f_->degree, v.at(0, start + i));
        if (!v.is_zero()) out.push_back(std::move(v));
      }
    }
    return out;
  }

  // image of the probe tuple under T_p via a Heilbronn stream (sparse rows)
  Matrix probe_image_prime(int64_t p) {
    Matrix out(f_, 1, width());
    for (int b = 0; b < generators(); ++b) {
      Matrix img = hecke_apply(*S_, p, probe_[b]);
      std::copy(img.row(0), img.row(0) + static_cast<size_t>(S_->dim) * f_->degree,
                out.row(0) + static_cast<size_t>(b * S_->dim) * f_->degree);
    }
    return out;
  }

  // reduce a width()-row against the echelon basis, returning coordinates
  std::vector<FieldElement> coordinates(Matrix row) const {
    std::vector<FieldElement> coords(q_, FieldElement(f_, 0));
    for (int i = 0; i < q_; ++i) {
      FieldElement c = row.get(0, epivot_[i]);
      coords[i] = c;
      if (c.is_zero()) continue;
      for (int j = 0; j < width(); ++j) {
        uint64_t prod[FieldDescriptor::kMaxDegree];
        f_->mul(prod, c.data(), ebasis_.at(i, j));
        f_->sub(row.at(0, j), row.at(0, j), prod);
      }
    }
    if (!row.is_zero())
      throw InternalError("element outside the Hecke span; index bound too small");
    return coords;
  }

  // u-vectors for one generator: y * T_m for all m <= B0 by prime streams
  // and the Hecke recurrences
  std::vector<Matrix> hecke_orbit(const Matrix& y) const {
    std::vector<Matrix> u(B0_ + 1, Matrix(f_, 1, S_->dim));
    u[1] = y;
    int64_t n = S_->level;
    int64_t ell = f_->ell;
    for (int64_t m = 2; m <= B0_; ++m) {
      // smallest prime factor
      int64_t p = 2;
      while (m % p != 0) ++p;
      if (m == p) {
        u[m] = hecke_apply(*S_, p, y);
      } else if ((m / p) % p != 0) {
        u[m] = hecke_apply(*S_, p, u[m / p]);  // T_m = T_{m/p} T_p, coprime
      } else if (n % p == 0) {
        u[m] = hecke_apply(*S_, p, u[m / p]);  // U_p powers
      } else {
        // T_{p^{e+1}} = T_p T_{p^e} - p^{k-1} eps(p) T_{p^{e-1}} times T_{m'}
        Matrix a = hecke_apply(*S_, p, u[m / p]);
        int64_t pk = pow_mod(p, static_cast<uint64_t>(S_->weight - 1), ell);
        FieldElement scale = FieldElement(f_, pk) * S_->eps(p);
        u[m] = a - u[m / (p * p)] * scale;
      }
    }
    return u;
  }

  void build() {
    int D = S_->dim;
    // generating tuple: start from sparse cuspidal vectors, extend until the
    // Hecke orbits span the whole cuspidal subspace
    std::vector<Matrix> candidates = sparse_cusp_vectors(64);
    size_t cand_next = 0;
    Subspace covered(f_, D);
    std::vector<std::vector<Matrix>> orbits;
    while (covered.dim() < S_->cuspidal.dim()) {
      Matrix y(f_, 1, D);
      bool found = false;
      while (cand_next < candidates.size()) {
        Matrix cand = candidates[cand_next++];
        if (!S_->cuspidal.contains(cand)) continue;
        if (covered.contains(cand)) continue;
        y = cand;
        found = true;
        break;
      }
      if (!found) {
        // fall back to cuspidal basis rows (dense probes)
        for (int i = 0; i < S_->cuspidal.dim(); ++i) {
          Matrix cand(f_, 1, D);
          std::copy(S_->cuspidal.basis().row(i),
                    S_->cuspidal.basis().row(i) + static_cast<size_t>(D) * f_->degree,
                    cand.row(0));
          if (!covered.contains(cand)) { y = cand; found = true; break; }
        }
      }
      if (!found) throw InternalError("could not generate the cuspidal module");
      auto orbit = hecke_orbit(y);
      // grow the covered space
      Matrix stack(f_, covered.dim() + static_cast<int>(B0_), D);
      for (int i = 0; i < covered.dim(); ++i)
        std::copy(covered.basis().row(i), covered.basis().row(i) + static_cast<size_t>(D) * f_->degree,
                  stack.row(i));
      for (int64_t m = 1; m <= B0_; ++m)
        std::copy(orbit[m].row(0), orbit[m].row(0) + static_cast<size_t>(D) * f_->degree,
                  stack.row(covered.dim() + static_cast<int>(m) - 1));
      covered = Subspace::from_rows(std::move(stack));
      probe_.push_back(y);
      orbits.push_back(std::move(orbit));
    }

    // decide whether the first probe alone is faithful: every coefficient
    // relation among its u-vectors must kill every generator's orbit
    int g = static_cast<int>(probe_.size());
    if (g > 1) {
      Matrix u1(f_, static_cast<int>(B0_), D);
      for (int64_t m = 1; m <= B0_; ++m)
        std::copy(orbits[0][m].row(0), orbits[0][m].row(0) + static_cast<size_t>(D) * f_->degree,
                  u1.row(static_cast<int>(m) - 1));
      Subspace u1span = Subspace::from_rows(u1);
      // relations: kernel of the map c -> sum c_m u_m
      Subspace rel = kernel(u1);
      bool faithful = true;
      for (int r = 0; r < rel.dim() && faithful; ++r) {
        for (int b = 1; b < g && faithful; ++b) {
          Matrix acc(f_, 1, D);
          for (int64_t m = 1; m <= B0_; ++m) {
            FieldElement c = rel.basis().get(r, static_cast<int>(m) - 1);
            if (c.is_zero()) continue;
            acc = acc + orbits[b][m] * c;
          }
          if (!acc.is_zero()) faithful = false;
        }
      }
      if (faithful) {
        probe_.resize(1);
        orbits.resize(1);
      }
      (void)u1span;
    }

    // assemble stacked u-vectors and echelonize with coordinate bookkeeping
    g = static_cast<int>(probe_.size());
    int W = g * D;
    std::vector<Matrix> u(B0_ + 1, Matrix(f_, 1, W));
    for (int64_t m = 1; m <= B0_; ++m)
      for (int b = 0; b < g; ++b)
        std::copy(orbits[b][m].row(0), orbits[b][m].row(0) + static_cast<size_t>(D) * f_->degree,
                  u[m].row(0) + static_cast<size_t>(b * D) * f_->degree);

    // incremental echelon with expression of each u_m in the basis
    beta_.assign(B0_ + 1, {});
    pivot_index_.clear();
    std::vector<int> pivots;
    std::vector<Matrix> basis_rows;
    for (int64_t m = 1; m <= B0_; ++m) {
      Matrix row = u[m];
      std::vector<FieldElement> coord(basis_rows.size(), FieldElement(f_, 0));
      for (size_t i = 0; i < basis_rows.size(); ++i) {
        FieldElement c = row.get(0, pivots[i]);
        coord[i] = c;
        if (c.is_zero()) continue;
        for (int j = 0; j < W; ++j) {
          uint64_t prod[FieldDescriptor::kMaxDegree];
          f_->mul(prod, c.data(), basis_rows[i].at(0, j));
          f_->sub(row.at(0, j), row.at(0, j), prod);
        }
      }
      if (!row.is_zero()) {
        int pc = 0;
        while (f_->is_zero(row.at(0, pc))) ++pc;
        FieldElement lead = row.get(0, pc);
        row = row * lead.inverse();
        basis_rows.push_back(row);
        pivots.push_back(pc);
        pivot_index_.push_back(m);
        coord.push_back(lead);  // u_m = (previous combo) + lead * new row
      }
      beta_[m] = std::move(coord);
    }
    q_ = static_cast<int>(basis_rows.size());
    // pad all beta rows to length q
    for (int64_t m = 1; m <= B0_; ++m) beta_[m].resize(q_, FieldElement(f_, 0));
    ebasis_ = Matrix(f_, q_, W);
    epivot_ = pivots;
    for (int i = 0; i < q_; ++i)
      std::copy(basis_rows[i].row(0), basis_rows[i].row(0) + static_cast<size_t>(W) * f_->degree,
                ebasis_.row(i));
  }

  const ModSymSpace* S_;
  FieldRef f_;
  int64_t B0_;
  int q_ = 0;
  std::vector<int64_t> pivot_index_;  // m whose u_m created echelon row i
  std::vector<Matrix> probe_;   // generating tuple rows (1 x dim each)
  Matrix ebasis_;               // q x (g * dim) echelon basis of T's image
  std::vector<int> epivot_;
  std::vector<std::vector<FieldElement>> beta_;  // m -> coordinates of T_m
  std::map<int64_t, Matrix> tau_;
  std::map<int64_t, std::vector<FieldElement>> dvec_;
};

}  // namespace msf
