#include <catch2/catch_amalgamated.hpp>

#include "msf/linalg.hpp"

using namespace msf;

namespace {

Matrix from_ints(FieldRef f, int rows, int cols, std::vector<int64_t> v) {
  Matrix m(f, rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.set_int(i, j, v[i * cols + j]);
  return m;
}

// all vectors of F_ell^n, as row matrices (prime field only, brute force)
std::vector<Matrix> all_vectors(FieldRef f, int n) {
  std::vector<Matrix> out;
  int64_t ell = f->ell;
  int64_t total = 1;
  for (int i = 0; i < n; ++i) total *= ell;
  for (int64_t code = 0; code < total; ++code) {
    Matrix v(f, 1, n);
    int64_t c = code;
    for (int i = 0; i < n; ++i) { v.set_int(0, i, c % ell); c /= ell; }
    out.push_back(v);
  }
  return out;
}

Matrix random_matrix(FieldRef f, int n, std::mt19937_64& rng) {
  Matrix m(f, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.set_int(i, j, static_cast<int64_t>(rng() % f->ell));
  return m;
}

}  // namespace

TEST_CASE("kernel of zero and identity") {
  FieldRef f3 = make_extension(3, 1);
  REQUIRE(kernel(Matrix(f3, 2, 2)).dim() == 2);
  FieldRef f5 = make_extension(5, 1);
  REQUIRE(kernel(Matrix::identity(f5, 3)).dim() == 0);
}

TEST_CASE("kernel canonical basis example") {
  FieldRef f5 = make_extension(5, 1);
  Matrix m = from_ints(f5, 2, 2, {1, 2, 2, 4});
  Subspace k = kernel(m);
  REQUIRE(k.dim() == 1);
  // canonical reduced echelon form scales the line through (3,1) to (1,2)
  REQUIRE(k.basis().get(0, 0) == FieldElement(f5, 1));
  REQUIRE(k.basis().get(0, 1) == FieldElement(f5, 2));
  REQUIRE(k.contains(from_ints(f5, 1, 2, {3, 1})));
  // enumerate all 25 vectors and compare with the span
  int count = 0;
  for (auto& v : all_vectors(f5, 2)) {
    if ((v * m).is_zero()) {
      ++count;
      REQUIRE(k.contains(v));
    }
  }
  REQUIRE(count == 5);  // the line through (3,1)
}

TEST_CASE("kernel agrees with brute force on small matrices") {
  std::mt19937_64 rng(101);
  for (int64_t ell : {2, 3, 5}) {
    FieldRef f = make_extension(ell, 1);
    for (int n = 1; n <= 3; ++n) {
      for (int trial = 0; trial < 12; ++trial) {
        Matrix m = random_matrix(f, n, rng);
        Subspace k = kernel(m);
        int64_t expect = 0;
        for (auto& v : all_vectors(f, n))
          if ((v * m).is_zero()) ++expect;
        int64_t got = 1;
        for (int i = 0; i < k.dim(); ++i) got *= ell;
        REQUIRE(got == expect);
      }
    }
  }
}

TEST_CASE("rank plus kernel dimension") {
  std::mt19937_64 rng(55);
  for (int64_t ell : {2, 5, 13}) {
    FieldRef f = make_extension(ell, 1);
    for (int trial = 0; trial < 200; ++trial) {
      int n = 1 + static_cast<int>(rng() % 6);
      Matrix m = random_matrix(f, n, rng);
      REQUIRE(rank(m) + kernel(m).dim() == n);
    }
  }
}

TEST_CASE("intersect idempotent and with full space") {
  FieldRef f3 = make_extension(3, 1);
  Subspace a = Subspace::from_rows(from_ints(f3, 2, 3, {1, 0, 0, 0, 1, 0}));
  REQUIRE(intersect(a, a) == a);
  Subspace full = Subspace::full(f3, 3);
  REQUIRE(intersect(full, a) == a);
  REQUIRE(intersect(a, full) == a);
}

TEST_CASE("intersect two planes in F3^3") {
  FieldRef f3 = make_extension(3, 1);
  Subspace a = Subspace::from_rows(from_ints(f3, 2, 3, {1, 0, 0, 0, 1, 0}));
  Subspace b = Subspace::from_rows(from_ints(f3, 2, 3, {0, 1, 0, 0, 0, 1}));
  Subspace c = intersect(a, b);
  REQUIRE(c.dim() == 1);
  Matrix e2 = from_ints(f3, 1, 3, {0, 1, 0});
  REQUIRE(c.contains(e2));
  // brute force: count vectors in both spans
  int count = 0;
  for (auto& v : all_vectors(f3, 3))
    if (a.contains(v) && b.contains(v)) ++count;
  REQUIRE(count == 3);
}

TEST_CASE("intersect is commutative and associative") {
  std::mt19937_64 rng(77);
  FieldRef f = make_extension(5, 1);
  for (int trial = 0; trial < 20; ++trial) {
    auto rnd_space = [&](int gens) {
      Matrix m(f, gens, 4);
      for (int i = 0; i < gens; ++i)
        for (int j = 0; j < 4; ++j) m.set_int(i, j, static_cast<int64_t>(rng() % 5));
      return Subspace::from_rows(m);
    };
    Subspace a = rnd_space(2), b = rnd_space(2), c = rnd_space(3);
    REQUIRE(intersect(a, b) == intersect(b, a));
    REQUIRE(intersect(intersect(a, b), c) == intersect(a, intersect(b, c)));
  }
}

TEST_CASE("intersect dimension bound") {
  std::mt19937_64 rng(78);
  FieldRef f = make_extension(3, 1);
  for (int trial = 0; trial < 30; ++trial) {
    Matrix ma(f, 2, 4), mb(f, 3, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 4; ++j) ma.set_int(i, j, static_cast<int64_t>(rng() % 3));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 4; ++j) mb.set_int(i, j, static_cast<int64_t>(rng() % 3));
    Subspace a = Subspace::from_rows(ma), b = Subspace::from_rows(mb);
    REQUIRE(intersect(a, b).dim() >= a.dim() + b.dim() - 4);
  }
}

TEST_CASE("intersect rejects ambient mismatch") {
  FieldRef f = make_extension(3, 1);
  REQUIRE_THROWS_AS(intersect(Subspace::full(f, 2), Subspace::full(f, 3)), InputError);
}

TEST_CASE("charpoly of identity and diagonal") {
  FieldRef f5 = make_extension(5, 1);
  Poly cp = charpoly(Matrix::identity(f5, 2));
  REQUIRE(cp == Poly::from_ints(f5, {1, -2, 1}));  // (x-1)^2
  Matrix d = from_ints(f5, 2, 2, {1, 0, 0, 2});
  REQUIRE(charpoly(d) == Poly::from_ints(f5, {2, 2, 1}));  // x^2+2x+2
}

TEST_CASE("charpoly of a companion matrix") {
  FieldRef f3 = make_extension(3, 1);
  // companion of x^2 + 1: rows (0,1),(-1,0); expanding the 2x2 determinant
  Matrix c = from_ints(f3, 2, 2, {0, 1, -1, 0});
  REQUIRE(charpoly(c) == Poly::from_ints(f3, {1, 0, 1}));
}

TEST_CASE("charpoly non-square errors") {
  FieldRef f3 = make_extension(3, 1);
  REQUIRE_THROWS_AS(charpoly(Matrix(f3, 2, 3)), InputError);
}

TEST_CASE("Cayley-Hamilton on random matrices") {
  std::mt19937_64 rng(3);
  for (int64_t ell : {2, 3, 5, 7}) {
    FieldRef f = make_extension(ell, 1);
    for (int trial = 0; trial < 10; ++trial) {
      int n = 2 + static_cast<int>(rng() % 5);  // up to 6x6
      Matrix m = random_matrix(f, n, rng);
      Poly cp = charpoly(m);
      Matrix acc(f, n, n);
      for (int i = cp.degree(); i >= 0; --i) {
        acc = acc * m;
        acc = acc + Matrix::scalar(f, n, cp.coeff(i));
      }
      REQUIRE(acc.is_zero());
    }
  }
}

TEST_CASE("charpoly constant term is det-consistent") {
  // diag example: det = product of eigenvalues
  FieldRef f7 = make_extension(7, 1);
  Matrix d = from_ints(f7, 3, 3, {2, 0, 0, 0, 3, 0, 0, 0, 4});
  Poly cp = charpoly(d);
  // constant term = (-1)^3 det = -24 = -3 = 4 mod 7
  REQUIRE(cp.coeff(0) == FieldElement(f7, 4));
}

TEST_CASE("restrict_to identity and full space") {
  FieldRef f5 = make_extension(5, 1);
  Matrix m = from_ints(f5, 3, 3, {1, 2, 0, 0, 3, 1, 4, 0, 2});
  Subspace full = Subspace::full(f5, 3);
  REQUIRE(restrict_to(Matrix::identity(f5, 3), full) == Matrix::identity(f5, 3));
  REQUIRE(restrict_to(m, full) == m);
}

TEST_CASE("restrict_to an eigenspace") {
  FieldRef f5 = make_extension(5, 1);
  Matrix m = from_ints(f5, 3, 3, {1, 0, 0, 0, 2, 0, 0, 0, 2});
  Matrix shift = m - Matrix::scalar(f5, 3, FieldElement(f5, 2));
  Subspace eig2 = kernel(shift);
  REQUIRE(eig2.dim() == 2);
  REQUIRE(restrict_to(m, eig2) == Matrix::scalar(f5, 2, FieldElement(f5, 2)));
}

TEST_CASE("restrict_to rejects non-invariant subspace") {
  FieldRef f5 = make_extension(5, 1);
  Matrix rot = from_ints(f5, 2, 2, {0, 1, 1, 0});
  Subspace line = Subspace::from_rows(from_ints(f5, 1, 2, {1, 0}));
  REQUIRE_THROWS_WITH(restrict_to(rot, line), "subspace not invariant");
}

TEST_CASE("simultaneous eigenspaces: identity operator") {
  FieldRef f5 = make_extension(5, 1);
  auto pieces = simultaneous_eigenspaces({Matrix::identity(f5, 3)}, Subspace::full(f5, 3));
  REQUIRE(pieces.size() == 1);
  REQUIRE(pieces[0].ext_degree == 1);
  REQUIRE(pieces[0].eigenvalues[0] == FieldElement(f5, 1));
  REQUIRE(pieces[0].space.dim() == 3);
}

TEST_CASE("simultaneous eigenspaces: split diagonal") {
  FieldRef f5 = make_extension(5, 1);
  Matrix d = from_ints(f5, 2, 2, {1, 0, 0, 2});
  auto pieces = simultaneous_eigenspaces({d}, Subspace::full(f5, 2));
  REQUIRE(pieces.size() == 2);
  REQUIRE(pieces[0].eigenvalues[0] == FieldElement(f5, 1));
  REQUIRE(pieces[1].eigenvalues[0] == FieldElement(f5, 2));
  REQUIRE(pieces[0].space.dim() == 1);
  REQUIRE(pieces[1].space.dim() == 1);
}

TEST_CASE("simultaneous eigenspaces: conjugate pair over extension") {
  FieldRef f5 = make_extension(5, 1);
  // companion matrix of x^2 - 2 (irreducible mod 5)
  Matrix c = from_ints(f5, 2, 2, {0, 1, 2, 0});
  auto pieces = simultaneous_eigenspaces({c}, Subspace::full(f5, 2));
  REQUIRE(pieces.size() == 2);
  for (auto& p : pieces) {
    REQUIRE(p.ext_degree == 2);
    REQUIRE(p.space.dim() == 1);
    // eigenvalue squares to 2
    FieldElement lam = p.eigenvalues[0];
    REQUIRE(lam * lam == FieldElement(lam.field(), 2));
  }
}

TEST_CASE("simultaneous eigenspaces: non-commuting rejected") {
  FieldRef f5 = make_extension(5, 1);
  Matrix a = from_ints(f5, 2, 2, {0, 1, 0, 0});
  Matrix b = from_ints(f5, 2, 2, {0, 0, 1, 0});
  REQUIRE_THROWS_AS(simultaneous_eigenspaces({a, b}, Subspace::full(f5, 2)), InputError);
}

TEST_CASE("simultaneous eigenspaces: nilpotent block reports generalized gap") {
  FieldRef f5 = make_extension(5, 1);
  // Jordan block J_2(1): true eigenspace 1-dim, generalized 2-dim
  Matrix j = from_ints(f5, 2, 2, {1, 0, 1, 1});
  auto pieces = simultaneous_eigenspaces({j}, Subspace::full(f5, 2));
  REQUIRE(pieces.size() == 1);
  REQUIRE(pieces[0].space.dim() == 1);
  REQUIRE(pieces[0].generalized_dim == 2);
}

TEST_CASE("matrix base change is a homomorphism") {
  FieldRef f3 = make_extension(3, 1);
  FieldRef f9 = make_extension(3, 2);
  std::mt19937_64 rng(9);
  Matrix a = random_matrix(f3, 3, rng), b = random_matrix(f3, 3, rng);
  REQUIRE((a * b).base_change(f9) == a.base_change(f9) * b.base_change(f9));
  REQUIRE((a + b).base_change(f9) == a.base_change(f9) + b.base_change(f9));
}
