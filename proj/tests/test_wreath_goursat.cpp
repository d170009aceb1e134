#include <set>

#include "doctest.h"
#include "test_helpers.hpp"
#include "wreathlab/finite_model.hpp"
#include "wreathlab/rng.hpp"
#include "wreathlab/wreath.hpp"

using namespace wreathlab;
using namespace wreathlab::testing;

namespace {

GroupElement random_element(const WreathGroup& g, Rng& rng, std::int64_t span = 4) {
  AbelianElement q = g.qgroup().free_rank() == 1
                         ? g.qgroup().element({rng.range(-span, span)})
                         : g.qgroup().element(
                               {static_cast<std::int64_t>(rng.below(g.qgroup().torsion_moduli()[0]))});
  ModuleElement n = g.module().zero();
  for (int i = 0; i < 2; ++i) {
    if (rng.coin()) continue;
    std::int64_t pos = g.qgroup().free_rank() == 1
                           ? rng.range(-span, span)
                           : static_cast<std::int64_t>(rng.below(g.qgroup().torsion_moduli()[0]));
    n = g.module().add(
        n, g.module().delta(XPoint{0, g.qgroup().element({pos})}, g.base().element({1})));
  }
  return g.make(std::move(q), std::move(n));
}

}  // namespace

TEST_CASE("group arithmetic laws") {
  WreathGroup g = lamplighter();
  // (1, 0)(0, delta_0) = (1, delta_0).
  GroupElement t = shift(g, 1);
  GroupElement b = lamp(g, 0);
  GroupElement tb = g.multiply(t, b);
  CHECK(tb.q.coords[0] == 1);
  CHECK(tb.n == b.n);

  Rng rng(2);
  for (int i = 0; i < 500; ++i) {
    GroupElement x = random_element(g, rng);
    GroupElement y = random_element(g, rng);
    GroupElement z = random_element(g, rng);
    CHECK(g.multiply(x, g.inverse(x)) == g.identity());
    CHECK(g.multiply(g.multiply(x, y), z) == g.multiply(x, g.multiply(y, z)));
  }
}

TEST_CASE("commutator basics") {
  WreathGroup g = lamplighter();
  Rng rng(4);
  GroupElement t = shift(g, 1);
  GroupElement b = lamp(g, 0);
  CHECK(g.commutator(random_element(g, rng), g.identity()) == g.identity());
  // [t, b] is a difference of two lamps.
  GroupElement c = g.commutator(t, b);
  CHECK(c.q.is_zero());
  CHECK(c.n.support_size() == 2);
  // N abelian: commutators of module elements vanish.
  for (int i = 0; i < 50; ++i) {
    GroupElement n1 = g.embed(random_element(g, rng).n);
    GroupElement n2 = g.embed(random_element(g, rng).n);
    CHECK(g.commutator(n1, n2) == g.identity());
  }
}

TEST_CASE("triplet validation") {
  WreathGroup g = lamplighter();
  // Free Q_H with an invariant ideal validates.
  CHECK_NOTHROW(shortcut_subgroup(g));

  // Z/2 on X = Z/2 with B = Z/2: a = delta_{x0} satisfies a + a^q in N_H for
  // N_H the diagonal, but not for N_H = 0.
  FgAbelianGroup q2(0, {2});
  FgAbelianGroup b2(0, {2});
  QSet x2(q2, {AbelianSubgroup::trivial(q2)});
  WreathGroup w2(q2, b2, x2);
  auto pts = x2.all_points();
  ModuleElement a = w2.module().delta(pts[0], b2.element({1}));
  ModuleElement diag = w2.module().add(a, w2.module().delta(pts[1], b2.element({1})));
  Submodule nh_diag = Submodule::finite_x(WindowLattice::from_elements(w2.module(), pts, {diag}));
  Submodule nh_zero = Submodule::finite_x(WindowLattice::zero(w2.module(), pts));

  auto alpha = std::vector<std::pair<AbelianElement, ModuleElement>>{{q2.element({1}), a}};
  CHECK(triplet_violations(w2, AbelianSubgroup::full(q2), nh_diag, alpha).empty());
  CHECK(!triplet_violations(w2, AbelianSubgroup::full(q2), nh_zero, alpha).empty());
  CHECK_THROWS_AS(GoursatTriplet::make(w2, AbelianSubgroup::full(q2), nh_zero, alpha),
                  std::invalid_argument);
}

TEST_CASE("triplet membership") {
  WreathGroup g = lamplighter();
  GoursatTriplet h = shortcut_subgroup(g);
  CHECK(triplet_contains(h, g.identity()));
  CHECK(triplet_contains(h, shift(g, 2)) == triplet_contains(h, g.multiply(shift(g, 2), g.identity())));
  // (t^2, 0): membership requires 0 - a_{t^2} = delta_0 in the ideal: false.
  CHECK(!triplet_contains(h, shift(g, 2)));
  // The designated lift (t^2, delta_0) is a member.
  CHECK(triplet_contains(h, g.multiply(shift(g, 2), lamp(g, 0))));
  CHECK(!triplet_contains(h, shift(g, 1)));

  GoursatTriplet ideal_h = ideal_subgroup(g, {1, 1});
  CHECK(triplet_contains(ideal_h, g.embed(lamp_pattern(g, {0, 5}))));
  CHECK(!triplet_contains(ideal_h, lamp(g, 0)));
}

TEST_CASE("triplet index") {
  WreathGroup g = lamplighter();
  CHECK(triplet_index(shortcut_subgroup(g)) == GroupIndex::of(16));
  CHECK(triplet_index(ideal_subgroup(g, {1, 1})) == GroupIndex::infinite());

  FgAbelianGroup q2(0, {2});
  QSet x2(q2, {AbelianSubgroup::trivial(q2)});
  WreathGroup w2(q2, FgAbelianGroup(0, {2}), x2);
  Submodule full = Submodule::finite_x(WindowLattice::full(w2.module(), x2.all_points()));
  GoursatTriplet whole = GoursatTriplet::make(
      w2, AbelianSubgroup::full(q2), full,
      {{q2.element({1}), w2.module().zero()}});
  CHECK(triplet_index(whole) == GroupIndex::of(1));
}

TEST_CASE("triplet conjugation") {
  WreathGroup g = lamplighter();
  GoursatTriplet h = shortcut_subgroup(g);

  CHECK(triplet_conjugate(h, g.identity()) == h);
  // Conjugating by a Q-lift leaves the translation-invariant ideal in place.
  GoursatTriplet moved = triplet_conjugate(h, shift(g, 5));
  CHECK(moved.npart() == h.npart());

  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    GroupElement f = random_element(g, rng);
    GroupElement x = random_element(g, rng);
    GoursatTriplet hf = triplet_conjugate(h, f);
    CHECK(triplet_contains(hf, g.conjugate(x, f)) == triplet_contains(h, x));
  }

  // Functoriality: (H^g)^h = H^{gh} canonically.
  for (int i = 0; i < 60; ++i) {
    GroupElement f1 = random_element(g, rng);
    GroupElement f2 = random_element(g, rng);
    CHECK(triplet_conjugate(triplet_conjugate(h, f1), f2) ==
          triplet_conjugate(h, g.multiply(f1, f2)));
  }
}

TEST_CASE("conjugate membership criterion agrees with direct conjugation") {
  WreathGroup g = lamplighter();
  Rng rng(14);
  for (const GoursatTriplet& h : {shortcut_subgroup(g), ideal_subgroup(g, {1, 1})}) {
    for (int i = 0; i < 1000; ++i) {
      GroupElement x = random_element(g, rng);
      GroupElement f = random_element(g, rng);
      CHECK(conjugate_membership(x, f, h) == triplet_contains(h, g.conjugate(x, f)));
    }
    // f = identity reduces to plain membership.
    for (int i = 0; i < 50; ++i) {
      GroupElement x = random_element(g, rng);
      CHECK(conjugate_membership(x, g.identity(), h) == triplet_contains(h, x));
    }
  }
}

TEST_CASE("conjugate membership exhaustive on a finite quotient") {
  WreathGroup w = regular_finite_wreath({3}, {2});
  std::vector<GroupElement> everyone = w.all_elements();
  for (const auto& h : enumerate_triplets(w)) {
    for (std::size_t i = 0; i < everyone.size(); i += 3) {
      for (std::size_t j = 0; j < everyone.size(); j += 5) {
        CHECK(conjugate_membership(everyone[i], everyone[j], h) ==
              triplet_contains(h, w.conjugate(everyone[i], everyone[j])));
      }
    }
  }
}

TEST_CASE("normalizer index in the module") {
  WreathGroup g = lamplighter();
  // H inside N: everything normalizes.
  CHECK(normalizer_index_in_module(ideal_subgroup(g, {1, 1})) == GroupIndex::of(1));
  // Q_H = Z with the invariant ideal: finite index.
  FgAbelianGroup q = g.qgroup();
  GoursatTriplet full_q = GoursatTriplet::make(
      g, AbelianSubgroup::full(q), Submodule::laurent(g.module(), PolyFp{2, {1, 1, 0, 1}}),
      {{q.element({1}), g.module().zero()}});
  CHECK(normalizer_index_in_module(full_q).is_finite());
  // Q_H = Z with N_H = 0: infinite index.
  GoursatTriplet zero_n = GoursatTriplet::make(g, AbelianSubgroup::full(q),
                                               Submodule::laurent_zero(g.module()),
                                               {{q.element({1}), g.module().zero()}});
  CHECK(normalizer_index_in_module(zero_n) == GroupIndex::infinite());
}

TEST_CASE("goursat bijection against brute force") {
  for (std::int64_t k : {1, 2, 3}) {
    auto rep = goursat_audit({k}, {2});
    CHECK(rep.ok);
    CHECK(rep.brute_subgroups == rep.triplet_subgroups);
  }
  // Negative control.
  auto bad = goursat_audit({2}, {2}, 10000, true);
  CHECK(!bad.ok);
}

TEST_CASE("box powers") {
  WreathGroup g = lamplighter();
  std::vector<XPoint> z = window_points(box(g.qgroup(), 3).elements(), g.xset());
  BoxPower t(g.module(), box(g.base(), 1), z);
  CHECK(t.size() == 8);
  CHECK(t.is_subgroup());
  CHECK(t.contains(lamp_pattern(g, {-1, 1})));
  CHECK(!t.contains(lamp_pattern(g, {2})));
  CHECK(t.elements().size() == 8);

  Rng rng(3);
  for (int i = 0; i < 50; ++i) CHECK(t.contains(t.sample(rng)));
}

TEST_CASE("product transversals") {
  WreathGroup g = lamplighter();
  std::vector<AbelianElement> iset = box(g.qgroup(), 3).elements();
  std::vector<XPoint> z = window_points(iset, g.xset());
  ProductTransversal f(g, iset, BoxPower(g.module(), box(g.base(), 1), z));
  CHECK(f.size() == 24);
  auto elems = f.elements();
  CHECK(elems.size() == 24);
  std::set<GroupElement> distinct(elems.begin(), elems.end());
  CHECK(distinct.size() == 24);
  Rng rng(5);
  for (int i = 0; i < 100; ++i) CHECK(f.contains(f.sample(rng)));

  // Trivial transversal for the whole group: F = {e}.
  ProductTransversal trivial(g, {g.qgroup().zero()}, std::vector<ModuleElement>{g.module().zero()});
  CHECK(trivial.size() == 1);
  CHECK(trivial.elements()[0] == g.identity());
}

TEST_CASE("product transversal meets cosets evenly on a finite quotient") {
  WreathGroup w = regular_finite_wreath({3}, {2});
  // K = the subgroup Q x 0... use the triplet with Q_H = Q, N_H = 0 lattice:
  auto pts = w.xset().all_points();
  Submodule zero = Submodule::finite_x(WindowLattice::zero(w.module(), pts));
  // alpha = 0 on the generator: (1, 0) must satisfy the torsion relation
  // 3*(1,0) = identity: accumulated N-part 0 in N_H. Valid.
  GoursatTriplet k = GoursatTriplet::make(w, AbelianSubgroup::full(w.qgroup()), zero,
                                          {{w.qgroup().element({1}), w.module().zero()}});
  // F = Q-lifts x all of N: multiplicity |N| * |Q| / [G:K] ... count directly.
  std::vector<AbelianElement> iset;
  for (std::int64_t v = 0; v < 3; ++v) iset.push_back(w.qgroup().element({v}));
  BoxPower t(w.module(), box(w.base(), 1), pts);
  ProductTransversal f(w, iset, t);

  // Exhaustive: count elements of F in each left coset of K.
  std::vector<GroupElement> everyone = w.all_elements();
  std::map<std::set<std::size_t>, int> coset_hits;
  auto f_elems = f.elements();
  for (const auto& fe : f_elems) {
    // Identify the coset fe*K by its member set.
    std::set<std::size_t> key;
    for (std::size_t i = 0; i < everyone.size(); ++i) {
      if (triplet_contains(k, w.multiply(w.inverse(fe), everyone[i]))) key.insert(i);
    }
    coset_hits[key]++;
  }
  REQUIRE(!coset_hits.empty());
  int mult = coset_hits.begin()->second;
  CHECK(Int(coset_hits.size()) == triplet_index(k).value());
  for (const auto& [key, count] : coset_hits) CHECK(count == mult);
}
