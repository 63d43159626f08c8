#include <catch2/catch_amalgamated.hpp>

#include "msf/dirichlet.hpp"

using namespace msf;

TEST_CASE("index and cusp counts") {
  REQUIRE(gamma0_index(11) == 12);
  REQUIRE(gamma0_index(74) == 114);
  REQUIRE(gamma0_index(1406) == 2280);
  REQUIRE(gamma0_index(1) == 1);
  REQUIRE(cusps_gamma0(11) == 2);
  REQUIRE(cusps_gamma0(74) == 4);
  REQUIRE(cusps_gamma0(1406) == 8);
  REQUIRE(gamma1_index(13) == 84);
  REQUIRE(cusps_gamma1(13) == 12);
}

TEST_CASE("genus of X0") {
  REQUIRE(genus_gamma0(2) == 0);
  REQUIRE(genus_gamma0(11) == 1);
  REQUIRE(genus_gamma0(22) == 2);
  REQUIRE(genus_gamma0(33) == 3);
  REQUIRE(genus_gamma0(37) == 2);
  REQUIRE(genus_gamma0(42) == 5);
  REQUIRE(genus_gamma0(74) == 8);
  REQUIRE(genus_gamma0(1406) == 187);
}

TEST_CASE("genus of X1") {
  REQUIRE(genus_gamma1(13) == 2);
  REQUIRE(genus_gamma1(16) == 2);
  REQUIRE(genus_gamma1(17) == 5);
  REQUIRE(genus_gamma1(23) == 12);
}

TEST_CASE("sturm bounds") {
  REQUIRE(sturm_bound(11, 2) == 2);
  REQUIRE(sturm_bound(74, 2) == 19);
  REQUIRE(sturm_bound(1, 12) == 1);
  REQUIRE(sturm_bound(1406, 2) == 380);
  REQUIRE(sturm_bound(1406 * 19, 2) == 7220);
}

TEST_CASE("characteristic zero cusp dimensions") {
  REQUIRE(dim_cusp_char0(11, 2) == 1);
  REQUIRE(dim_cusp_char0(1, 12) == 1);
  REQUIRE(dim_cusp_char0(2, 2) == 0);
  REQUIRE(dim_cusp_char0(11, 6) == 4);
  REQUIRE(dim_cusp_char0(74, 2) == 8);
  REQUIRE(dim_cusp_char0(1, 2) == 0);
  REQUIRE(dim_cusp_char0(1, 16) == 1);
  REQUIRE(dim_cusp_char0(1, 24) == 2);
  REQUIRE(dim_cusp_char0(1, 26) == 1);
  REQUIRE(dim_cusp_char0(13, 2, GroupKind::Gamma1) == 2);
  REQUIRE(dim_cusp_char0(7, 3, GroupKind::Gamma1) == 1);
  REQUIRE(dim_cusp_char0(23, 2, GroupKind::Gamma1) == 12);
  REQUIRE_THROWS_AS(dim_cusp_char0(11, 1), InputError);
}

TEST_CASE("trivial character") {
  FieldRef f5 = make_extension(5, 1);
  auto chi = DirichletCharacter::trivial(12, f5);
  for (int64_t a : {1, 5, 7, 11}) REQUIRE(chi(a) == FieldElement(f5, 1));
  REQUIRE(chi(2).is_zero());
  REQUIRE(chi.conductor() == 1);
  REQUIRE(chi.order() == 1);
  REQUIRE(chi.is_even());
  REQUIRE(chi.label() == "trivial");
}

TEST_CASE("quadratic character mod 11") {
  FieldRef f5 = make_extension(5, 1);
  // (Z/11)* is cyclic; generator image -1 gives the Legendre symbol
  auto factors = unit_group_factors(11);
  REQUIRE(factors.size() == 1);
  REQUIRE(factors[0].gen == 2);  // smallest primitive root mod 11
  DirichletCharacter chi(11, f5, {FieldElement(f5, 4)});
  REQUIRE(chi.order() == 2);
  REQUIRE(chi.conductor() == 11);
  REQUIRE(!chi.is_even());  // 11 = 3 mod 4
  // squares mod 11: 1,3,4,5,9
  for (int64_t a : {1, 3, 4, 5, 9}) REQUIRE(chi(a) == FieldElement(f5, 1));
  for (int64_t a : {2, 6, 7, 8, 10}) REQUIRE(chi(a) == FieldElement(f5, 4));
}

TEST_CASE("character multiplicativity, exhaustive small moduli") {
  FieldRef f5 = make_extension(5, 1);
  for (int64_t n : {8, 12, 21, 40, 45}) {
    for (auto& orb : character_orbits(n, 5)) {
      const auto& chi = orb.rep;
      for (int64_t a = 1; a < n; ++a) {
        if (gcd_i64(a, n) != 1) continue;
        for (int64_t b = a; b < n; ++b) {
          if (gcd_i64(b, n) != 1) continue;
          REQUIRE(chi(a * b % n) == chi(a) * chi(b));
        }
      }
    }
  }
  (void)f5;
}

TEST_CASE("character orbit count matches group order") {
  // number of characters into F_5-bar equals the prime-to-5 part of phi(n)
  for (int64_t n : {7, 11, 12, 13, 21}) {
    int64_t total = 0;
    for (auto& orb : character_orbits(n, 5)) total += orb.orbit_size;
    int64_t expect = euler_phi(n);
    while (expect % 5 == 0) expect /= 5;
    REQUIRE(total == expect);
  }
}

TEST_CASE("conductor computation") {
  FieldRef f5 = make_extension(5, 1);
  // quadratic character mod 21 with conductor 3: trivial at 7, nontrivial at 3
  auto factors = unit_group_factors(21);
  REQUIRE(factors.size() == 2);  // 3 and 7
  std::vector<FieldElement> images;
  for (auto& fac : factors) {
    if (fac.prime_power == 3) images.emplace_back(f5, 4);  // order 2
    else images.emplace_back(f5, 1);
  }
  DirichletCharacter chi(21, f5, std::move(images));
  REQUIRE(chi.conductor() == 3);
  auto r3 = restrict_character(chi, 3);
  REQUIRE(r3.modulus() == 3);
  REQUIRE(r3(2) == FieldElement(f5, 4));
  REQUIRE_THROWS_WITH(restrict_character(chi, 7), "character does not descend");
}

TEST_CASE("restrict then extend round trip") {
  FieldRef f5 = make_extension(5, 1);
  auto triv = DirichletCharacter::trivial(1406, f5);
  auto r = restrict_character(triv, 74);
  REQUIRE(r.is_trivial());
  REQUIRE(r.modulus() == 74);
  auto e = extend_character(r, 1406);
  REQUIRE(e.is_trivial());
  REQUIRE(e.modulus() == 1406);
}

TEST_CASE("extend and restrict agree on units") {
  FieldRef f5 = make_extension(5, 1);
  // quadratic character mod 11, extended to 33, restricted back
  DirichletCharacter chi(11, f5, {FieldElement(f5, 4)});
  auto up = extend_character(chi, 33);
  REQUIRE(up.modulus() == 33);
  for (int64_t a = 1; a < 33; ++a) {
    if (gcd_i64(a, 33) != 1) continue;
    REQUIRE(up(a) == chi(a % 11));
  }
  auto down = restrict_character(up, 11);
  REQUIRE(down == chi);
}

TEST_CASE("character labels round trip") {
  FieldRef f5 = make_extension(5, 1);
  DirichletCharacter chi(23, f5, {FieldElement(f5, 4)});  // quadratic mod 23
  std::string lab = chi.label();
  REQUIRE(lab == "23.1:2");  // -1 = 4 = g^2 with g = 2 the canonical generator
  auto parsed = DirichletCharacter::parse_label(lab, 23, 5);
  REQUIRE(parsed == chi);
  REQUIRE(DirichletCharacter::parse_label("trivial", 23, 5).is_trivial());
  REQUIRE_THROWS_AS(DirichletCharacter::parse_label("24.1:2", 23, 5), InputError);
}

TEST_CASE("odd character parity") {
  FieldRef f5 = make_extension(5, 1);
  DirichletCharacter chi23(23, f5, {FieldElement(f5, 4)});
  REQUIRE(!chi23.is_even());  // 23 = 3 mod 4
}
