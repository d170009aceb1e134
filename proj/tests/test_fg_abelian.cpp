#include <set>

#include "doctest.h"
#include "wreathlab/fg_abelian.hpp"
#include "wreathlab/rng.hpp"

using namespace wreathlab;

namespace {

const FgAbelianGroup Z(1, {});
const FgAbelianGroup Z2rank(2, {});
const FgAbelianGroup Z_mod3(0, {3});
const FgAbelianGroup Z_x_Z3(1, {3});
const FgAbelianGroup Z_mod4(0, {4});
const FgAbelianGroup Z_mod6(0, {6});
const FgAbelianGroup Z_x_Z2(1, {2});
const FgAbelianGroup Z2_x_Z4(2, {4});

}  // namespace

TEST_CASE("reduce") {
  CHECK(Z_x_Z3.element({5, 7}).coords == std::vector<std::int64_t>{5, 1});
  CHECK(Z_x_Z3.element({0, 0}).coords == std::vector<std::int64_t>{0, 0});
  CHECK(Z_mod4.element({-1}).coords == std::vector<std::int64_t>{3});
  CHECK_THROWS_AS(Z.element({1, 2}), std::invalid_argument);
}

TEST_CASE("subgroup_from_generators canonical values") {
  auto s = AbelianSubgroup::from_generators(Z, {Z.element({2}), Z.element({4})});
  CHECK(s == AbelianSubgroup::from_generators(Z, {Z.element({2})}));
  CHECK(s.contains(Z.element({-6})));
  CHECK(!s.contains(Z.element({3})));

  auto diag = AbelianSubgroup::from_generators(Z2rank, {Z2rank.element({2, 0}), Z2rank.element({0, 3})});
  lat::Mat expect = lat::hermite({{2, 0}, {0, 3}}, 2);
  CHECK(diag.lattice() == expect);

  // Z/6 generated by 2 is {0, 2, 4}: hand enumeration.
  auto sub6 = AbelianSubgroup::from_generators(Z_mod6, {Z_mod6.element({2})});
  std::set<std::vector<std::int64_t>> members;
  for (std::int64_t v = 0; v < 6; ++v)
    if (sub6.contains(Z_mod6.element({v}))) members.insert({v});
  CHECK(members == std::set<std::vector<std::int64_t>>{{0}, {2}, {4}});
}

TEST_CASE("hermite canonicality under regenerated generating sets") {
  Rng rng(17);
  auto s = AbelianSubgroup::from_generators(Z2_x_Z4,
                                            {Z2_x_Z4.element({2, 0, 1}), Z2_x_Z4.element({0, 3, 2})});
  std::vector<AbelianElement> gens = s.generators();
  for (int trial = 0; trial < 200; ++trial) {
    // Random integer combinations that still generate: mix then append originals.
    std::vector<AbelianElement> mixed;
    for (const auto& g : gens) {
      AbelianElement m = g;
      for (const auto& h : gens) {
        std::int64_t c = rng.range(-3, 3);
        m = Z2_x_Z4.add(m, Z2_x_Z4.scale(h, c));
      }
      mixed.push_back(std::move(m));
    }
    for (const auto& g : gens) mixed.push_back(g);
    CHECK(AbelianSubgroup::from_generators(Z2_x_Z4, mixed) == s);
  }
}

TEST_CASE("contains via back-substitution") {
  CHECK(AbelianSubgroup::from_generators(Z, {Z.element({2})}).contains(Z.element({4})));
  CHECK(!AbelianSubgroup::from_generators(Z, {Z.element({2})}).contains(Z.element({3})));
  auto diag = AbelianSubgroup::from_generators(Z2rank, {Z2rank.element({2, 0}), Z2rank.element({0, 3})});
  CHECK(diag.contains(Z2rank.element({2, 3})));
}

TEST_CASE("index") {
  CHECK(AbelianSubgroup::from_generators(Z, {Z.element({3})}).index() == GroupIndex::of(3));
  CHECK(AbelianSubgroup::trivial(Z).index() == GroupIndex::infinite());

  // Brute-force residue count for diag(2,3) in Z^2.
  auto diag = AbelianSubgroup::from_generators(Z2rank, {Z2rank.element({2, 0}), Z2rank.element({0, 3})});
  std::set<AbelianElement> residues;
  for (std::int64_t a = -6; a <= 6; ++a)
    for (std::int64_t b = -6; b <= 6; ++b) residues.insert(diag.residue(Z2rank.element({a, b})));
  CHECK(diag.index() == GroupIndex::of(Int(residues.size())));
  CHECK(residues.size() == 6);
}

TEST_CASE("index multiplicativity on random chains") {
  Rng rng(23);
  const FgAbelianGroup& q = Z2_x_Z4;
  for (int trial = 0; trial < 60; ++trial) {
    // S1 generated by scaled basis vectors, S2 a further scaling: S2 <= S1.
    std::int64_t a = 1 + static_cast<std::int64_t>(rng.below(3));
    std::int64_t b = 1 + static_cast<std::int64_t>(rng.below(3));
    std::int64_t c = 1 + static_cast<std::int64_t>(rng.below(2));
    std::int64_t d = 1 + static_cast<std::int64_t>(rng.below(2));
    auto s1 = AbelianSubgroup::from_generators(
        q, {q.element({a, 0, 1}), q.element({0, b, 0}), q.element({0, 0, 2})});
    std::vector<AbelianElement> s2_gens;
    for (const auto& g : s1.generators()) s2_gens.push_back(q.scale(g, c * d));
    auto s2 = AbelianSubgroup::from_generators(q, s2_gens);

    GroupIndex i1 = s1.index(), i2 = s2.index(), rel = relative_index(s1, s2);
    if (i1.is_finite() && rel.is_finite()) {
      REQUIRE(i2.is_finite());
      CHECK(i2.value() == i1.value() * rel.value());
    }
  }
}

TEST_CASE("sum and intersection") {
  auto two = AbelianSubgroup::from_generators(Z, {Z.element({2})});
  auto three = AbelianSubgroup::from_generators(Z, {Z.element({3})});
  CHECK(sum_subgroups(two, three) == AbelianSubgroup::full(Z));
  auto four = AbelianSubgroup::from_generators(Z, {Z.element({4})});
  auto six = AbelianSubgroup::from_generators(Z, {Z.element({6})});
  CHECK(intersect_subgroups(four, six) == AbelianSubgroup::from_generators(Z, {Z.element({12})}));

  // (2Z ⊕ 0) + (0 ⊕ Z/2) inside Z ⊕ Z/2 has index 2: enumerate cosets.
  auto sum = sum_subgroups(AbelianSubgroup::from_generators(Z_x_Z2, {Z_x_Z2.element({2, 0})}),
                           AbelianSubgroup::from_generators(Z_x_Z2, {Z_x_Z2.element({0, 1})}));
  std::set<AbelianElement> residues;
  for (std::int64_t a = -4; a <= 4; ++a)
    for (std::int64_t b = 0; b < 2; ++b) residues.insert(sum.residue(Z_x_Z2.element({a, b})));
  CHECK(residues.size() == 2);
  CHECK(sum.index() == GroupIndex::of(2));
}

TEST_CASE("power subgroup") {
  CHECK(power_subgroup(Z, 3) == AbelianSubgroup::from_generators(Z, {Z.element({3})}));
  CHECK(power_subgroup(Z, 3).index() == GroupIndex::of(3));
  CHECK(power_subgroup(Z, 1) == AbelianSubgroup::full(Z));
  CHECK_THROWS_AS(power_subgroup(Z, 0), std::invalid_argument);

  // Q = Z ⊕ Z/2, k = 2: brute-force residues give index 4.
  auto p = power_subgroup(Z_x_Z2, 2);
  std::set<AbelianElement> residues;
  for (std::int64_t a = -4; a <= 4; ++a)
    for (std::int64_t b = 0; b < 2; ++b) residues.insert(p.residue(Z_x_Z2.element({a, b})));
  CHECK(p.index() == GroupIndex::of(4));
  CHECK(residues.size() == 4);
}

TEST_CASE("seminorm") {
  CHECK(Z_x_Z3.seminorm(Z_x_Z3.element({5, 2})) == 5);
  CHECK(Z_x_Z3.seminorm(Z_x_Z3.element({0, 2})) == 0);
  CHECK(Z2rank.seminorm(Z2rank.element({-7, 1})) == 7);
}

TEST_CASE("boxes") {
  Box b4 = box(Z, 4);
  std::vector<std::int64_t> coords;
  for (const auto& e : b4.elements()) coords.push_back(e.coords[0]);
  CHECK(coords == std::vector<std::int64_t>{-1, 0, 1, 2});

  Box b3 = box(Z, 3);
  coords.clear();
  for (const auto& e : b3.elements()) coords.push_back(e.coords[0]);
  CHECK(coords == std::vector<std::int64_t>{-1, 0, 1});

  const FgAbelianGroup z2(0, {2});
  for (std::int64_t k : {1, 2, 5}) {
    Box bt = box(z2, k);
    CHECK(bt.size() == 2);
    CHECK(bt.elements().size() == 2);
  }

  // Size formula: k^d * |T|.
  CHECK(box(Z_x_Z2, 5).size() == 10);
}

TEST_CASE("box transversal law") {
  for (const FgAbelianGroup& q : {Z, Z2rank, Z_x_Z2}) {
    for (std::int64_t k = 1; k <= 12; ++k) {
      Box bk = box(q, k);
      auto mult = finite_to_one_multiplicity(bk.elements(), power_subgroup(q, k));
      REQUIRE(mult.has_value());
      // Expected multiplicity: 1 per free factor, m / gcd(k, m) per torsion factor.
      Int expect = 1;
      for (auto m : q.torsion_moduli()) expect *= m / std::gcd(k, m);
      CHECK(*mult == expect);
    }
  }
}

TEST_CASE("finite-to-one transversal edge cases") {
  auto three = AbelianSubgroup::from_generators(Z, {Z.element({3})});
  CHECK(finite_to_one_multiplicity(box(Z, 3).elements(), three) == Int(1));

  std::vector<AbelianElement> six;
  for (std::int64_t v = 0; v < 6; ++v) six.push_back(Z.element({v}));
  CHECK(finite_to_one_multiplicity(six, three) == Int(2));

  std::vector<AbelianElement> uneven = {Z.element({0}), Z.element({1}), Z.element({1}),
                                        Z.element({2})};
  CHECK(!finite_to_one_multiplicity(uneven, three).has_value());
  CHECK_THROWS_AS(finite_to_one_multiplicity(six, AbelianSubgroup::trivial(Z)),
                  std::invalid_argument);
}

TEST_CASE("centered overlap counts match exhaustive counting") {
  for (std::int64_t k = 1; k <= 50; ++k) {
    Box bk = box(Z, k);
    std::set<std::int64_t> members;
    for (const auto& e : bk.elements()) members.insert(e.coords[0]);
    for (std::int64_t r = -k; r <= k; ++r) {
      Int count = 0;
      for (auto qv : members)
        if (members.count(r - qv)) ++count;
      CHECK(bk.reflect_overlap(Z.element({r})) == count);
    }
    // Odd k: the documented closed form (k - |r|)/k for the hit fraction.
    if (k % 2 == 1) {
      for (std::int64_t r = -k; r <= k; ++r) {
        Int expect = std::max<std::int64_t>(0, k - std::abs(r));
        CHECK(bk.reflect_overlap(Z.element({r})) == expect);
      }
    }
  }
}

TEST_CASE("solve_in_generators") {
  auto two = AbelianSubgroup::from_generators(Z, {Z.element({2})});
  auto c = solve_in_generators(two, {Z.element({2})}, Z.element({6}));
  REQUIRE(c.size() == 1);
  CHECK(c[0] == 3);

  auto full = AbelianSubgroup::full(Z2rank);
  std::vector<AbelianElement> gens = {Z2rank.element({1, 0}), Z2rank.element({1, 1})};
  auto c2 = solve_in_generators(full, gens, Z2rank.element({0, 1}));
  REQUIRE(c2.size() == 2);
  CHECK(c2[0] == -1);
  CHECK(c2[1] == 1);

  CHECK_THROWS_AS(solve_in_generators(two, {Z.element({2})}, Z.element({3})),
                  std::invalid_argument);
}

TEST_CASE("decompose flagship cases") {
  {
    // Q = Z, R = 0, S_1 = 0: U = 0, V = Z, W_1 = 0, W'_1 = Z, k = 1.
    auto r = AbelianSubgroup::trivial(Z);
    auto scheme = decompose(Z, r, {AbelianSubgroup::trivial(Z)});
    CHECK(scheme.U == AbelianSubgroup::trivial(Z));
    CHECK(scheme.V == AbelianSubgroup::full(Z));
    CHECK(scheme.W[0] == AbelianSubgroup::trivial(Z));
    CHECK(scheme.Wp[0] == AbelianSubgroup::full(Z));
    CHECK(scheme.k == 1);
  }
  {
    // Q = Z, R = 2Z: U = Z, V = 0, m = 2, k = 2.
    auto r = AbelianSubgroup::from_generators(Z, {Z.element({2})});
    auto scheme = decompose(Z, r, {AbelianSubgroup::trivial(Z)});
    CHECK(scheme.U == AbelianSubgroup::full(Z));
    CHECK(scheme.V == AbelianSubgroup::trivial(Z));
    CHECK(scheme.m == 2);
    CHECK(scheme.k == 2);
  }
  {
    // R = Q: k = 1.
    auto scheme = decompose(Z, AbelianSubgroup::full(Z), {AbelianSubgroup::trivial(Z)});
    CHECK(scheme.U == AbelianSubgroup::full(Z));
    CHECK(scheme.V == AbelianSubgroup::trivial(Z));
    CHECK(scheme.k == 1);
  }
}

TEST_CASE("decompose postconditions on mixed groups") {
  Rng rng(5);
  const FgAbelianGroup q(2, {4});
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<AbelianElement> rgens;
    for (int j = 0; j < 2; ++j)
      rgens.push_back(q.element({rng.range(-2, 2), rng.range(-2, 2), rng.range(0, 3)}));
    auto r = AbelianSubgroup::from_generators(q, rgens);
    std::vector<AbelianSubgroup> stabs = {
        AbelianSubgroup::from_generators(q, {q.element({rng.range(-2, 2), rng.range(-2, 2), 0})}),
        AbelianSubgroup::trivial(q)};
    auto scheme = decompose(q, r, stabs);

    // Q = U ⊕ V and V = W_l ⊕ W'_l.
    CHECK(sum_subgroups(scheme.U, scheme.V) == AbelianSubgroup::full(q));
    CHECK(intersect_subgroups(scheme.U, scheme.V) == AbelianSubgroup::trivial(q));
    for (std::size_t l = 0; l < stabs.size(); ++l) {
      CHECK(sum_subgroups(scheme.W[l], scheme.Wp[l]) == scheme.V);
      CHECK(intersect_subgroups(scheme.W[l], scheme.Wp[l]) == AbelianSubgroup::trivial(q));
    }

    // U[m] <= R and (U ⊕ W_l)[m_l] <= R + S_l, by direct membership.
    for (const auto& g : scheme.U.generators()) CHECK(r.contains(q.scale(g, scheme.m)));
    for (std::size_t l = 0; l < stabs.size(); ++l) {
      auto uw = sum_subgroups(scheme.U, scheme.W[l]);
      auto rs = sum_subgroups(r, stabs[l]);
      for (const auto& g : uw.generators()) CHECK(rs.contains(q.scale(g, scheme.m_l[l])));
    }

    // R has finite index in U; V and the W'_l are torsion-free by design.
    CHECK(relative_index(scheme.U, r).is_finite());
  }
}

TEST_CASE("quotient and subgroup enumeration") {
  auto three = AbelianSubgroup::from_generators(Z, {Z.element({3})});
  CHECK(quotient_representatives(three).size() == 3);
  CHECK_THROWS_AS(quotient_representatives(AbelianSubgroup::trivial(Z)), std::invalid_argument);

  auto sub6 = AbelianSubgroup::from_generators(Z_mod6, {Z_mod6.element({2})});
  CHECK(subgroup_elements(sub6).size() == 3);
  CHECK(subgroup_order(sub6) == GroupIndex::of(3));
  CHECK(subgroup_order(AbelianSubgroup::full(Z)) == GroupIndex::infinite());
}
