// Dense exact linear algebra over a finite field.
//
// Convention used project-wide: vectors are rows and operators act on the
// right, w = v * M. Kernels, eigenvectors and subspaces all follow it.
#pragma once

#include "msf/poly.hpp"

namespace msf {

class Matrix {
 public:
  Matrix() : f_(nullptr), rows_(0), cols_(0) {}
  Matrix(FieldRef f, int rows, int cols)
      : f_(f), rows_(rows), cols_(cols),
        a_(static_cast<size_t>(rows) * cols * f->degree, 0) {}

  static Matrix identity(FieldRef f, int n) {
    Matrix m(f, n, n);
    for (int i = 0; i < n; ++i) f->set_from_int(m.at(i, i), 1);
    return m;
  }
  static Matrix scalar(FieldRef f, int n, const FieldElement& s) {
    Matrix m(f, n, n);
    for (int i = 0; i < n; ++i) std::copy(s.data(), s.data() + f->degree, m.at(i, i));
    return m;
  }

  FieldRef field() const { return f_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  uint64_t* at(int i, int j) {
    return a_.data() + (static_cast<size_t>(i) * cols_ + j) * f_->degree;
  }
  const uint64_t* at(int i, int j) const {
    return a_.data() + (static_cast<size_t>(i) * cols_ + j) * f_->degree;
  }
  uint64_t* row(int i) { return a_.data() + static_cast<size_t>(i) * cols_ * f_->degree; }
  const uint64_t* row(int i) const {
    return a_.data() + static_cast<size_t>(i) * cols_ * f_->degree;
  }

  FieldElement get(int i, int j) const {
    return FieldElement(f_, std::vector<uint64_t>(at(i, j), at(i, j) + f_->degree));
  }
  void set(int i, int j, const FieldElement& v) {
    std::copy(v.data(), v.data() + f_->degree, at(i, j));
  }
  void set_int(int i, int j, int64_t v) { f_->set_from_int(at(i, j), v); }

  friend bool operator==(const Matrix& x, const Matrix& y) {
    return x.f_ == y.f_ && x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
  }
  friend bool operator!=(const Matrix& x, const Matrix& y) { return !(x == y); }

  friend Matrix operator+(const Matrix& x, const Matrix& y) {
    check_shape(x, y);
    Matrix r = x;
    int d = x.f_->degree;
    for (size_t i = 0; i * d < r.a_.size(); ++i)
      x.f_->add(r.a_.data() + i * d, r.a_.data() + i * d, y.a_.data() + i * d);
    return r;
  }
  friend Matrix operator-(const Matrix& x, const Matrix& y) {
    check_shape(x, y);
    Matrix r = x;
    int d = x.f_->degree;
    for (size_t i = 0; i * d < r.a_.size(); ++i)
      x.f_->sub(r.a_.data() + i * d, r.a_.data() + i * d, y.a_.data() + i * d);
    return r;
  }
  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    if (x.f_ != y.f_) throw InputError("matrix field mismatch");
    if (x.cols_ != y.rows_) throw InputError("matrix shape mismatch");
    Matrix r(x.f_, x.rows_, y.cols_);
    FieldRef f = x.f_;
    int d = f->degree;
    if (d == 1) {
      uint64_t ell = static_cast<uint64_t>(f->ell);
      for (int i = 0; i < x.rows_; ++i) {
        uint64_t* out = r.row(i);
        for (int k = 0; k < x.cols_; ++k) {
          uint64_t v = *x.at(i, k);
          if (!v) continue;
          const uint64_t* yr = y.row(k);
          for (int j = 0; j < y.cols_; ++j) out[j] = (out[j] + v * yr[j]) % ell;
        }
      }
    } else {
      for (int i = 0; i < x.rows_; ++i)
        for (int k = 0; k < x.cols_; ++k) {
          if (f->is_zero(x.at(i, k))) continue;
          for (int j = 0; j < y.cols_; ++j) f->mul_add(r.at(i, j), x.at(i, k), y.at(k, j));
        }
    }
    return r;
  }
  Matrix operator*(const FieldElement& s) const {
    Matrix r = *this;
    int d = f_->degree;
    uint64_t prod[FieldDescriptor::kMaxDegree];
    for (size_t i = 0; i * d < r.a_.size(); ++i) {
      f_->mul(prod, r.a_.data() + i * d, s.data());
      std::copy(prod, prod + d, r.a_.data() + i * d);
    }
    return r;
  }

  Matrix transpose() const {
    Matrix r(f_, cols_, rows_);
    int d = f_->degree;
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        std::copy(at(i, j), at(i, j) + d, r.at(j, i));
    return r;
  }

  bool is_zero() const {
    for (auto v : a_)
      if (v) return false;
    return true;
  }

  // entrywise embedding into a larger field
  Matrix base_change(FieldRef target) const {
    if (target == f_) return *this;
    Matrix r(target, rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r.set(i, j, embed(get(i, j), target));
    return r;
  }

 private:
  static void check_shape(const Matrix& x, const Matrix& y) {
    if (x.f_ != y.f_ || x.rows_ != y.rows_ || x.cols_ != y.cols_)
      throw InputError("matrix shape mismatch");
  }
  FieldRef f_;
  int rows_, cols_;
  std::vector<uint64_t> a_;
};

// In-place reduced row echelon form. Returns pivot columns.
inline std::vector<int> rref_in_place(Matrix& m) {
  FieldRef f = m.field();
  int d = f->degree;
  std::vector<int> pivots;
  int r = 0;
  uint64_t invbuf[FieldDescriptor::kMaxDegree], coef[FieldDescriptor::kMaxDegree],
      prod[FieldDescriptor::kMaxDegree];
  for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
    int piv = -1;
    for (int i = r; i < m.rows(); ++i)
      if (!f->is_zero(m.at(i, c))) { piv = i; break; }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < m.cols(); ++j) {
        uint64_t tmp[FieldDescriptor::kMaxDegree];
        std::copy(m.at(r, j), m.at(r, j) + d, tmp);
        std::copy(m.at(piv, j), m.at(piv, j) + d, m.at(r, j));
        std::copy(tmp, tmp + d, m.at(piv, j));
      }
    f->inv(invbuf, m.at(r, c));
    for (int j = c; j < m.cols(); ++j) {
      f->mul(prod, m.at(r, j), invbuf);
      std::copy(prod, prod + d, m.at(r, j));
    }
    for (int i = 0; i < m.rows(); ++i) {
      if (i == r || f->is_zero(m.at(i, c))) continue;
      std::copy(m.at(i, c), m.at(i, c) + d, coef);
      for (int j = c; j < m.cols(); ++j) {
        f->mul(prod, coef, m.at(r, j));
        f->sub(m.at(i, j), m.at(i, j), prod);
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline int rank(Matrix m) { return static_cast<int>(rref_in_place(m).size()); }

// Row space of a matrix in canonical reduced echelon form.
class Subspace {
 public:
  Subspace() : ambient_(0) {}
  Subspace(FieldRef f, int ambient) : ambient_(ambient), basis_(f, 0, ambient) {}

  // canonicalizes the rows
  static Subspace from_rows(Matrix rows) {
    Subspace s;
    s.ambient_ = rows.cols();
    auto piv = rref_in_place(rows);
    Matrix b(rows.field(), static_cast<int>(piv.size()), rows.cols());
    for (size_t i = 0; i < piv.size(); ++i)
      std::copy(rows.row(static_cast<int>(i)),
                rows.row(static_cast<int>(i)) + static_cast<size_t>(rows.cols()) * rows.field()->degree,
                b.row(static_cast<int>(i)));
    s.basis_ = std::move(b);
    s.pivots_ = std::move(piv);
    return s;
  }
  static Subspace full(FieldRef f, int ambient) {
    return from_rows(Matrix::identity(f, ambient));
  }

  FieldRef field() const { return basis_.field(); }
  int ambient() const { return ambient_; }
  int dim() const { return basis_.rows(); }
  const Matrix& basis() const { return basis_; }
  const std::vector<int>& pivots() const { return pivots_; }

  bool contains(const Matrix& row_vec) const {
    if (row_vec.cols() != ambient_) throw InputError("ambient mismatch");
    Matrix v = row_vec;
    reduce_row(v, 0);
    return v.is_zero();
  }

  // coordinates of v in the echelon basis (throws if v is outside)
  std::vector<FieldElement> coordinates(const Matrix& row_vec) const {
    FieldRef f = basis_.field();
    Matrix v = row_vec;
    std::vector<FieldElement> coords;
    for (int i = 0; i < dim(); ++i) {
      FieldElement c = v.get(0, pivots_[i]);
      coords.push_back(c);
      if (!c.is_zero())
        for (int j = 0; j < ambient_; ++j) {
          uint64_t prod[FieldDescriptor::kMaxDegree];
          f->mul(prod, c.data(), basis_.at(i, j));
          f->sub(v.at(0, j), v.at(0, j), prod);
        }
    }
    if (!v.is_zero()) throw InputError("vector not in subspace");
    return coords;
  }

  Subspace base_change(FieldRef target) const {
    Subspace s;
    s.ambient_ = ambient_;
    s.basis_ = basis_.base_change(target);
    s.pivots_ = pivots_;
    return s;
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }

 private:
  void reduce_row(Matrix& v, int) const {
    FieldRef f = basis_.field();
    for (int i = 0; i < dim(); ++i) {
      const FieldElement c = v.get(0, pivots_[i]);
      if (c.is_zero()) continue;
      for (int j = 0; j < ambient_; ++j) {
        uint64_t prod[FieldDescriptor::kMaxDegree];
        f->mul(prod, c.data(), basis_.at(i, j));
        f->sub(v.at(0, j), v.at(0, j), prod);
      }
    }
  }
  int ambient_;
  Matrix basis_;
  std::vector<int> pivots_;
};

// {v : v*M = 0}, kernel of the right action on row vectors. An empty matrix
// (rows = 0) is the zero map out of F^cols, so the kernel is everything.
inline Subspace kernel(const Matrix& m) {
  FieldRef f = m.field();
  int n = m.rows();
  if (n == 0) return Subspace::full(f, 0);
  // v*M = 0  <=>  M^T v^T = 0; echelonize M^T and read off free variables
  Matrix t = m.transpose();
  auto piv = rref_in_place(t);
  std::vector<bool> is_pivot(n, false);
  std::vector<int> pivot_row_of_col(n, -1);
  for (size_t i = 0; i < piv.size(); ++i) {
    is_pivot[piv[i]] = true;
    pivot_row_of_col[piv[i]] = static_cast<int>(i);
  }
  int k = n - static_cast<int>(piv.size());
  Matrix basis(f, k, n);
  int out = 0;
  for (int free_col = 0; free_col < n; ++free_col) {
    if (is_pivot[free_col]) continue;
    basis.set_int(out, free_col, 1);
    for (int pc = 0; pc < n; ++pc) {
      if (!is_pivot[pc]) continue;
      int prow = pivot_row_of_col[pc];
      FieldElement val = t.get(prow, free_col);
      if (!val.is_zero()) basis.set(out, pc, -val);
    }
    ++out;
  }
  return Subspace::from_rows(std::move(basis));
}

// a ∩ b via the kernel of the stacked constraint matrix: x in a iff x is a
// combination of a's basis; solve [u v] * [A; B] = 0 with x = u*A = -v*B.
inline Subspace intersect(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient()) throw InputError("ambient mismatch");
  if (a.field() != b.field()) throw InputError("field mismatch");
  FieldRef f = a.field();
  int da = a.dim(), db = b.dim();
  if (da == 0 || db == 0) return Subspace(f, a.ambient());
  Matrix stacked(f, da + db, a.ambient());
  int d = f->degree;
  for (int i = 0; i < da; ++i)
    std::copy(a.basis().row(i), a.basis().row(i) + static_cast<size_t>(a.ambient()) * d,
              stacked.row(i));
  for (int i = 0; i < db; ++i)
    std::copy(b.basis().row(i), b.basis().row(i) + static_cast<size_t>(a.ambient()) * d,
              stacked.row(da + i));
  // kernel(stacked) = {(u,v) : u*A + v*B = 0}; then x = u*A lies in both row spaces
  Subspace ker = kernel(stacked);
  Matrix result(f, ker.dim(), a.ambient());
  for (int i = 0; i < ker.dim(); ++i) {
    for (int k = 0; k < da; ++k) {
      FieldElement c = ker.basis().get(i, k);
      if (c.is_zero()) continue;
      for (int j = 0; j < a.ambient(); ++j) {
        uint64_t prod[FieldDescriptor::kMaxDegree];
        f->mul(prod, c.data(), a.basis().at(k, j));
        f->add(result.at(i, j), result.at(i, j), prod);
      }
    }
  }
  return Subspace::from_rows(std::move(result));
}

// Characteristic polynomial via Hessenberg reduction; deterministic O(n^3).
inline Poly charpoly(const Matrix& m) {
  if (m.rows() != m.cols()) throw InputError("charpoly: matrix not square");
  FieldRef f = m.field();
  int n = m.rows();
  if (n == 0) return Poly::one(f);
  Matrix h = m;
  uint64_t inv[FieldDescriptor::kMaxDegree], coef[FieldDescriptor::kMaxDegree],
      prod[FieldDescriptor::kMaxDegree];
  int d = f->degree;
  for (int c = 0; c < n - 2; ++c) {
    int piv = -1;
    for (int r = c + 1; r < n; ++r)
      if (!f->is_zero(h.at(r, c))) { piv = r; break; }
    if (piv < 0) continue;
    if (piv != c + 1) {
      for (int j = 0; j < n; ++j) {
        uint64_t tmp[FieldDescriptor::kMaxDegree];
        std::copy(h.at(c + 1, j), h.at(c + 1, j) + d, tmp);
        std::copy(h.at(piv, j), h.at(piv, j) + d, h.at(c + 1, j));
        std::copy(tmp, tmp + d, h.at(piv, j));
      }
      for (int i = 0; i < n; ++i) {
        uint64_t tmp[FieldDescriptor::kMaxDegree];
        std::copy(h.at(i, c + 1), h.at(i, c + 1) + d, tmp);
        std::copy(h.at(i, piv), h.at(i, piv) + d, h.at(i, c + 1));
        std::copy(tmp, tmp + d, h.at(i, piv));
      }
    }
    f->inv(inv, h.at(c + 1, c));
    for (int r = c + 2; r < n; ++r) {
      if (f->is_zero(h.at(r, c))) continue;
      f->mul(coef, h.at(r, c), inv);
      // row r -= coef * row (c+1); column (c+1) += coef * column r
      for (int j = 0; j < n; ++j) {
        f->mul(prod, coef, h.at(c + 1, j));
        f->sub(h.at(r, j), h.at(r, j), prod);
      }
      for (int i = 0; i < n; ++i) {
        f->mul(prod, coef, h.at(i, r));
        f->add(h.at(i, c + 1), h.at(i, c + 1), prod);
      }
    }
  }
  // charpoly recurrence on the Hessenberg form: p_0 = 1,
  // p_k = (x - h[k-1][k-1]) p_{k-1} - sum_i (prod of subdiagonal) h[i][k-1] p_i
  std::vector<Poly> p;
  p.push_back(Poly::one(f));
  for (int k = 1; k <= n; ++k) {
    Poly xk = Poly(f, {-h.get(k - 1, k - 1), FieldElement(f, 1)});
    Poly pk = xk * p[k - 1];
    FieldElement beta(f, 1);
    for (int i = k - 2; i >= 0; --i) {
      beta = beta * h.get(i + 1, i);
      pk = pk - p[i] * (beta * h.get(i, k - 1));
    }
    p.push_back(pk);
  }
  return p[n];
}

// Matrix of the right action of m on the subspace s (in s's echelon basis).
// Throws if s is not invariant.
inline Matrix restrict_to(const Matrix& m, const Subspace& s) {
  if (m.rows() != s.ambient() || m.cols() != s.ambient())
    throw InputError("restrict: shape mismatch");
  FieldRef f = m.field();
  Matrix images = s.basis() * m;
  Matrix out(f, s.dim(), s.dim());
  for (int i = 0; i < s.dim(); ++i) {
    Matrix row(f, 1, s.ambient());
    std::copy(images.row(i), images.row(i) + static_cast<size_t>(s.ambient()) * f->degree,
              row.row(0));
    std::vector<FieldElement> coords;
    try {
      coords = s.coordinates(row);
    } catch (const InputError&) {
      throw InputError("subspace not invariant");
    }
    for (int j = 0; j < s.dim(); ++j) out.set(i, j, coords[j]);
  }
  return out;
}

inline Subspace kernel_power(const Matrix& m, int e) {
  Matrix acc = m;
  for (int i = 1; i < e; ++i) acc = acc * m;
  return kernel(acc);
}

struct EigenPiece {
  int ext_degree;                        // field degree of the eigenvalue tuple
  std::vector<FieldElement> eigenvalues; // one per operator, in F_{ell^ext_degree}
  Subspace space;                        // joint true eigenspace, over that field
  int generalized_dim;                   // joint generalized eigenspace dimension
};

// Common-eigenvector decomposition of a family of commuting operators
// restricted to an invariant subspace. True kernels only; when the joint
// generalized multiplicity exceeds the eigenspace dimension the difference
// is visible via generalized_dim. Deterministic order: extension degree,
// then the eigenvalue tuple lexicographically.
inline std::vector<EigenPiece> simultaneous_eigenspaces(const std::vector<Matrix>& ops,
                                                        const Subspace& ambient,
                                                        int max_degree = 64) {
  if (ops.empty()) throw InputError("simultaneous_eigenspaces: no operators");
  FieldRef f0 = ops[0].field();
  for (auto& op : ops) {
    if (op.field() != f0) throw InputError("operator field mismatch");
    if (op.rows() != ambient.ambient()) throw InputError("operator/ambient mismatch");
  }
  for (size_t i = 0; i < ops.size(); ++i)
    for (size_t j = i + 1; j < ops.size(); ++j)
      if (ops[i] * ops[j] != ops[j] * ops[i])
        throw InputError("operators do not commute");

  struct Node {
    Subspace space;                       // over current field
    Subspace gen_space;                   // generalized joint space
    std::vector<FieldElement> values;
  };
  std::vector<Node> live;
  {
    Node root;
    root.space = ambient;
    root.gen_space = ambient;
    live.push_back(std::move(root));
  }
  std::vector<EigenPiece> done;

  for (size_t oi = 0; oi < ops.size(); ++oi) {
    std::vector<Node> next;
    for (auto& node : live) {
      if (node.space.dim() == 0) continue;
      FieldRef cur = node.space.field();
      Matrix op = ops[oi].base_change(cur);
      Matrix r;
      try {
        r = restrict_to(op, node.space);
      } catch (const InputError&) {
        throw InputError("ambient not invariant under operator");
      }
      Poly cp = charpoly(r);
      for (auto& [fac, mult] : factor_poly(cp)) {
        int e = fac.degree();
        // fac is irreducible over F_{ell^cur}; its roots generate the
        // degree-(cur*e) extension of the prime field
        if (cur->degree * e > max_degree) continue;  // caller sees the gap via dims
        FieldRef ext = make_extension(cur->ell, cur->degree * e);
        Poly fac_ext(ext);
        {
          std::vector<FieldElement> cs;
          for (int i = 0; i <= fac.degree(); ++i) cs.push_back(embed(fac.coeff(i), ext));
          fac_ext = Poly(ext, cs);
        }
        for (auto& [lambda, lmult] : poly_roots(fac_ext)) {
          Matrix big = node.space.basis().base_change(ext);
          Subspace cur_space = Subspace::from_rows(big);
          Matrix op_ext = ops[oi].base_change(ext);
          Matrix shift = op_ext - Matrix::scalar(ext, op_ext.rows(), lambda);
          // true eigenspace within node.space
          Subspace eig = intersect(cur_space, kernel(shift));
          if (eig.dim() == 0) continue;
          // generalized: iterate the shift to stability inside gen_space
          Subspace gen = intersect(node.gen_space.base_change(ext), kernel_power(shift, mult));
          Node child;
          child.space = eig;
          child.gen_space = gen;
          child.values = node.values;
          // re-embed previous values into the larger field
          for (auto& v : child.values) v = embed(v, ext);
          child.values.push_back(lambda);
          next.push_back(std::move(child));
        }
      }
    }
    live = std::move(next);
  }

  for (auto& node : live) {
    EigenPiece piece;
    piece.ext_degree = node.space.field()->degree;
    piece.eigenvalues = node.values;
    piece.space = node.space;
    piece.generalized_dim = node.gen_space.dim();
    done.push_back(std::move(piece));
  }
  std::sort(done.begin(), done.end(), [](const EigenPiece& a, const EigenPiece& b) {
    if (a.ext_degree != b.ext_degree) return a.ext_degree < b.ext_degree;
    for (size_t i = 0; i < a.eigenvalues.size() && i < b.eigenvalues.size(); ++i) {
      if (a.eigenvalues[i] < b.eigenvalues[i]) return true;
      if (b.eigenvalues[i] < a.eigenvalues[i]) return false;
    }
    return false;
  });
  return done;
}

}  // namespace msf
