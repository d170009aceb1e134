#include <map>
#include <set>

#include "doctest.h"
#include "test_helpers.hpp"
#include "wreathlab/chabauty.hpp"
#include "wreathlab/finite_model.hpp"
#include "wreathlab/rng.hpp"
#include "wreathlab/weiss.hpp"

using namespace wreathlab;
using namespace wreathlab::testing;

TEST_CASE("enumeration is injective, deterministic, and exhaustive on finite groups") {
  WreathGroup w = regular_finite_wreath({3}, {2});
  Enumeration e(w);
  std::size_t total = 24;
  CHECK(e.usable_depth(100) == total);
  std::set<GroupElement> seen;
  for (std::size_t n = 1; n <= total; ++n) seen.insert(e.element(n));
  CHECK(seen.size() == total);
  CHECK_THROWS_AS(e.element(total + 1), std::out_of_range);

  // Identity appears (it is a radius-0 element).
  CHECK(seen.count(w.identity()) == 1);

  // Infinite lamplighter: deterministic prefix, injective.
  WreathGroup g = lamplighter();
  Enumeration e1(g), e2(g);
  std::set<GroupElement> prefix;
  for (std::size_t n = 1; n <= 200; ++n) {
    CHECK(e1.element(n) == e2.element(n));
    prefix.insert(e1.element(n));
  }
  CHECK(prefix.size() == 200);
}

TEST_CASE("pair enumeration lists disjoint pairs without repeats") {
  WreathGroup g = lamplighter();
  Enumeration e(g);
  PairEnumeration pairs(e);
  std::set<std::pair<std::vector<GroupElement>, std::vector<GroupElement>>> seen;
  CHECK(pairs.pair(1).a.empty());
  CHECK(pairs.pair(1).b.empty());
  for (std::size_t i = 1; i <= 140; ++i) {
    const auto& p = pairs.pair(i);
    // Disjointness.
    std::set<GroupElement> a(p.a.begin(), p.a.end());
    for (const auto& x : p.b) CHECK(a.count(x) == 0);
    CHECK(seen.emplace(p.a, p.b).second);
  }
}

TEST_CASE("d_pow") {
  WreathGroup g = lamplighter();
  Enumeration e(g);
  GoursatTriplet h1 = ideal_subgroup(g, {1, 1});
  GoursatTriplet h2 = ideal_subgroup(g, {1, 0, 1});

  auto oracle = [](const GoursatTriplet& h) {
    return [&h](const GroupElement& x) { return triplet_contains(h, x); };
  };
  CHECK(d_pow(oracle(h1), oracle(h1), 64, e) == 0);

  // A = G, B = empty: all indicators 1, sum = 1 - 2^{-D}.
  MembershipOracle all = [](const GroupElement&) { return true; };
  MembershipOracle none = [](const GroupElement&) { return false; };
  Rat expected = Rat(1) - Rat(1, Int(1) << 16);
  CHECK(d_pow(all, none, 16, e) == expected);

  // Hand-computed indicator sum for the two ideals at depth 32.
  Rat manual = 0;
  Int denom = 1;
  for (std::size_t n = 1; n <= 32; ++n) {
    denom *= 2;
    if (triplet_contains(h1, e.element(n)) != triplet_contains(h2, e.element(n)))
      manual += Rat(1, denom);
  }
  CHECK(d_pow(oracle(h1), oracle(h2), 32, e) == manual);
  CHECK(manual > 0);

  // Truncation monotonicity: deeper sums differ by at most 2^{-D}.
  Rat d32 = d_pow(oracle(h1), oracle(h2), 32, e);
  Rat d40 = d_pow(oracle(h1), oracle(h2), 40, e);
  CHECK(d40 >= d32);
  CHECK(d40 - d32 <= Rat(1, Int(1) << 32));
}

TEST_CASE("empirical measures") {
  WreathGroup g = lamplighter();
  GoursatTriplet h = ideal_subgroup(g, {1, 1});

  // F = {e} gives the point mass.
  EmpiricalMeasure point = empirical_measure({g.identity()}, h);
  REQUIRE(point.atoms().size() == 1);
  CHECK(point.atoms()[0].weight == 1);

  // H is normal here: F * H = delta_H for any F.
  std::vector<GroupElement> f;
  Rng rng(19);
  std::vector<AbelianElement> iset = box(g.qgroup(), 4).elements();
  BoxPower t(g.module(), box(g.base(), 1), window_points(iset, g.xset()));
  ProductTransversal pt(g, iset, t);
  f = pt.elements();
  EmpiricalMeasure mu = empirical_measure(f, h);
  REQUIRE(mu.atoms().size() == 1);
  CHECK(mu.atoms()[0].subgroup == h);
}

TEST_CASE("uniform measure on the conjugacy class in a finite quotient") {
  WreathGroup w = regular_finite_wreath({3}, {2});
  std::vector<GroupElement> everyone = w.all_elements();
  auto triplets = enumerate_triplets(w);

  for (const auto& k : triplets) {
    // Brute-force conjugacy class of K via membership profiles.
    std::set<std::string> class_keys;
    for (const auto& f : everyone) class_keys.insert(triplet_conjugate(k, f).canonical_key());

    EmpiricalMeasure mu = empirical_measure(everyone, k);  // full-group transversal
    CHECK(mu.atoms().size() == class_keys.size());
    for (const auto& atom : mu.atoms()) {
      CHECK(atom.weight == Rat(1, Int(class_keys.size())));
      CHECK(class_keys.count(atom.subgroup.canonical_key()) == 1);
    }
  }
}

TEST_CASE("e_ab masses") {
  WreathGroup g = lamplighter();
  GoursatTriplet h = ideal_subgroup(g, {1, 1});
  EmpiricalMeasure mu = empirical_measure({g.identity()}, h);
  CHECK(mu.e_ab_mass({}, {}) == 1);
  CHECK(mu.e_ab_mass({g.identity()}, {}) == 1);
  GroupElement inside = g.embed(lamp_pattern(g, {0, 1}));
  GroupElement outside = lamp(g, 0);
  CHECK(mu.e_ab_mass({inside}, {}) == 1);
  CHECK(mu.e_ab_mass({outside}, {}) == 0);
  CHECK(mu.e_ab_mass({}, {outside}) == 1);
}

TEST_CASE("d_prob metric axioms") {
  WreathGroup g = lamplighter();
  Enumeration e(g);
  PairEnumeration pairs(e);

  GoursatTriplet h1 = ideal_subgroup(g, {1, 1});
  GoursatTriplet h2 = ideal_subgroup(g, {1, 0, 1});
  GoursatTriplet h3 = ideal_subgroup(g, {1, 1, 1});
  EmpiricalMeasure m1 = empirical_measure({g.identity()}, h1);
  EmpiricalMeasure m2 = empirical_measure({g.identity()}, h2);
  EmpiricalMeasure m3 = empirical_measure({g.identity()}, h3);

  CHECK(d_prob(m1, m1, 64, pairs) == 0);
  CHECK(d_prob(m1, m2, 64, pairs) == d_prob(m2, m1, 64, pairs));
  CHECK(d_prob(m1, m3, 64, pairs) <= d_prob(m1, m2, 64, pairs) + d_prob(m2, m3, 64, pairs));

  // Mixtures: random convex combinations still satisfy the axioms.
  std::vector<MeasureAtom> mix = {{h1, Rat(1, 2)}, {h2, Rat(1, 2)}};
  EmpiricalMeasure m12 = EmpiricalMeasure::from_atoms(mix);
  CHECK(d_prob(m12, m12, 32, pairs) == 0);

  // Separation at finite depth needs an early distinguishing event: the full
  // group versus the trivial subgroup differ already on g_2 = delta_0.
  GoursatTriplet whole = GoursatTriplet::make(
      g, AbelianSubgroup::full(g.qgroup()), Submodule::laurent(g.module(), PolyFp{2, {1}}),
      {{g.qgroup().element({1}), g.module().zero()}});
  GoursatTriplet trivial = GoursatTriplet::make(
      g, AbelianSubgroup::trivial(g.qgroup()), Submodule::laurent_zero(g.module()), {});
  EmpiricalMeasure mw = empirical_measure({g.identity()}, whole);
  EmpiricalMeasure mt = empirical_measure({g.identity()}, trivial);
  Rat d8 = d_prob(mw, mt, 8, pairs);
  CHECK(d8 > 0);

  // Hand-computed value over the first 8 events.
  Rat manual = 0;
  Int denom = 1;
  for (std::size_t i = 1; i <= 8; ++i) {
    denom *= 2;
    const auto& p = pairs.pair(i);
    Rat diff = mw.e_ab_mass(p.a, p.b) - mt.e_ab_mass(p.a, p.b);
    if (diff < 0) diff = -diff;
    manual += diff / Rat(denom);
  }
  CHECK(d8 == manual);
}

TEST_CASE("d_prob truncation monotonicity") {
  WreathGroup g = lamplighter();
  Enumeration e(g);
  PairEnumeration pairs(e);
  GoursatTriplet whole = GoursatTriplet::make(
      g, AbelianSubgroup::full(g.qgroup()), Submodule::laurent(g.module(), PolyFp{2, {1}}),
      {{g.qgroup().element({1}), g.module().zero()}});
  GoursatTriplet trivial = GoursatTriplet::make(
      g, AbelianSubgroup::trivial(g.qgroup()), Submodule::laurent_zero(g.module()), {});
  EmpiricalMeasure mw = empirical_measure({g.identity()}, whole);
  EmpiricalMeasure mt = empirical_measure({g.identity()}, trivial);
  for (std::size_t d = 4; d <= 24; d += 4) {
    Rat shallow = d_prob(mw, mt, d, pairs);
    Rat deep = d_prob(mw, mt, d + 8, pairs);
    CHECK(deep >= shallow);
    CHECK(deep - shallow <= Rat(1, Int(1) << d));
  }
}

TEST_CASE("portmanteau convergence witness on the flagship") {
  WreathGroup g = lamplighter();
  Scheme scheme = build_scheme(g, ideal_subgroup(g, {1, 1}));
  Enumeration e(g);
  PairEnumeration pairs(e);
  std::size_t battery = 20;

  // |(F_i * K_i)(E) - (F_i * H)(E)| vanishes stagewise for each fixed event.
  std::vector<Rat> first_gap(battery, 0), last_gap(battery, 0);
  for (unsigned i = 1; i <= 6; ++i) {
    StageData st = stage(scheme, i);
    auto f = st.f_i.elements();
    EmpiricalMeasure mu = empirical_measure(f, st.k_i);
    EmpiricalMeasure nu = empirical_measure(f, scheme.h);
    for (std::size_t p = 1; p <= battery; ++p) {
      const auto& pr = pairs.pair(p);
      Rat gap = mu.e_ab_mass(pr.a, pr.b) - nu.e_ab_mass(pr.a, pr.b);
      if (gap < 0) gap = -gap;
      if (i == 1) first_gap[p - 1] = gap;
      last_gap[p - 1] = gap;
    }
  }
  for (std::size_t p = 0; p < battery; ++p) {
    CHECK(last_gap[p] <= first_gap[p]);
    CHECK(last_gap[p] == 0);
  }
}

TEST_CASE("measure gap is bounded by the word p sum") {
  WreathGroup g = lamplighter();
  Scheme scheme = build_scheme(g, ideal_subgroup(g, {1, 1, 0, 1}));
  Enumeration e(g);
  PairEnumeration pairs(e);
  for (unsigned i = 3; i <= 5; ++i) {
    StageData st = stage(scheme, i);
    auto f = st.f_i.elements();
    EmpiricalMeasure mu = empirical_measure(f, st.k_i);
    EmpiricalMeasure nu = empirical_measure(f, scheme.h);
    for (std::size_t p = 2; p <= 12; ++p) {
      const auto& pr = pairs.pair(p);
      Rat gap = mu.e_ab_mass(pr.a, pr.b) - nu.e_ab_mass(pr.a, pr.b);
      if (gap < 0) gap = -gap;
      Rat bound = 0;
      for (const auto& w : pr.a) bound += p_statistic_exact(w, st.k_i, scheme.h, f);
      for (const auto& w : pr.b) bound += p_statistic_exact(w, st.k_i, scheme.h, f);
      CHECK(gap <= bound);
    }
  }
}

TEST_CASE("p statistic") {
  WreathGroup g = lamplighter();
  GoursatTriplet h = ideal_subgroup(g, {1, 1});

  std::vector<AbelianElement> iset = box(g.qgroup(), 4).elements();
  BoxPower t(g.module(), box(g.base(), 1), window_points(iset, g.xset()));
  ProductTransversal f(g, iset, t);
  auto f_elems = f.elements();

  // K = H: p identically zero.
  Rng rng(23);
  for (int i = 0; i < 20; ++i) {
    GroupElement word = f.sample(rng);
    CHECK(p_statistic_exact(word, h, h, f_elems) == 0);
  }

  // MC estimates within 4 binomial standard errors of a fractional exact p:
  // use a stage-built K_i, whose window clipping makes p land strictly
  // inside (0, 1) for an ideal-supported word.
  Scheme variant = build_scheme(g, ideal_subgroup(g, {1, 1, 0, 1}));
  StageData st = stage(variant, 4);
  GroupElement ng = g.embed(lamp_pattern(g, {0, 1, 3}));
  auto st_elems = st.f_i.elements();
  Rat exact = p_statistic_exact(ng, st.k_i, variant.h, st_elems);
  CHECK(exact == Rat(3, 4));
  auto est = p_statistic_mc(ng, st.k_i, variant.h, st.f_i, 20000, 77);
  double pe = 0.75;
  double sigma = std::sqrt(pe * (1 - pe) / 20000.0);
  CHECK(std::abs(est.mean - pe) <= 4 * sigma + 1e-12);
}

TEST_CASE("folner defects") {
  WreathGroup g = lamplighter();
  std::vector<AbelianElement> iset = box(g.qgroup(), 4).elements();
  BoxPower t(g.module(), box(g.base(), 1), window_points(iset, g.xset()));
  ProductTransversal f(g, iset, t);

  CHECK(folner_defect(f, g.identity()) == 0);

  // Structured computation agrees with the exhaustive one on every test word.
  auto f_elems = f.elements();
  std::vector<GroupElement> words = {shift(g, 1), shift(g, -2), lamp(g, 0),
                                     g.multiply(shift(g, 1), lamp(g, 1)), lamp(g, 5)};
  for (const auto& w : words) {
    CHECK(folner_defect(f, w) == folner_defect(g, f_elems, w));
  }

  // Shift by r: defect 2|r|/|I| when the module part is empty.
  CHECK(folner_defect(f, shift(g, 1)) == Rat(2, 4));
  CHECK(folner_defect(f, shift(g, -2)) == Rat(4, 4));
}

TEST_CASE("centered defects match exhaustive counts") {
  FgAbelianGroup z(1, {});
  for (std::int64_t k = 1; k <= 50; ++k) {
    Box bk = box(z, k);
    auto elems = bk.elements();
    for (std::int64_t r = -k; r <= k; r += std::max<std::int64_t>(1, k / 3)) {
      AbelianElement re = z.element({r});
      CHECK(centered_defect(bk, re) == centered_defect(elems, re, z));
    }
  }
  // Odd boxes: exactly |r|/k.
  Box b9 = box(z, 9);
  for (std::int64_t r = -9; r <= 9; ++r)
    CHECK(centered_defect(b9, z.element({r})) == Rat(std::abs(r), 9));
}

TEST_CASE("tempered ratio") {
  WreathGroup g = lamplighter();
  // Prefix of lifted boxes in Q.
  std::vector<std::vector<GroupElement>> prefix;
  for (std::int64_t i = 1; i <= 6; ++i) {
    std::vector<GroupElement> fi;
    for (const auto& e : box(g.qgroup(), i).elements()) fi.push_back(g.lift(e));
    prefix.push_back(std::move(fi));

    if (i >= 2) {
      Rat ratio = tempered_ratio(g, prefix);
      // Exhaustive recomputation.
      std::set<GroupElement> acc;
      for (std::size_t j = 0; j + 1 < prefix.size(); ++j)
        for (const auto& a : prefix[j])
          for (const auto& b : prefix.back()) acc.insert(g.multiply(g.inverse(a), b));
      CHECK(ratio == Rat(Int(acc.size()), Int(prefix.back().size())));
      CHECK(ratio <= 4);  // bounded for the box sequence
    }
  }
}

TEST_CASE("adapted statistic") {
  WreathGroup g = lamplighter();
  std::vector<AbelianElement> iset = box(g.qgroup(), 5).elements();
  BoxPower t(g.module(), box(g.base(), 1), window_points(iset, g.xset()));

  // g = e with Phi = {0}: everything matches.
  CHECK(adapted_statistic(t, iset, g.identity(), {g.module().zero()}, g) == 1);
  // Phi outside the window: zero.
  CHECK(adapted_statistic(t, iset, g.identity(), {lamp_pattern(g, {9})}, g) == 0);

  // Exhaustive cross-check for a module word.
  GroupElement b = lamp(g, 0);
  std::vector<ModuleElement> phi = {g.module().zero(), lamp_pattern(g, {1})};
  Int good = 0;
  for (const auto& r : iset) {
    GroupElement comm = g.commutator(b, g.lift(r));
    bool ok = true;
    for (const auto& ph : phi) ok = ok && t.contains(g.module().add(comm.n, ph));
    if (ok) ++good;
  }
  CHECK(adapted_statistic(t, iset, b, phi, g) == Rat(good, Int(iset.size())));
}

TEST_CASE("restriction and pushforward of measures") {
  WreathGroup g = lamplighter();
  GoursatTriplet h = shortcut_subgroup(g);

  EmpiricalMeasure mu = empirical_measure({g.identity(), shift(g, 1), lamp(g, 0)}, h);
  auto pushed = pushforward_to_q(mu);
  REQUIRE(pushed.size() == 1);  // conjugation fixes Q_H when Q is abelian
  CHECK(pushed[0].first == h.qpart());
  CHECK(pushed[0].second == 1);

  // Restricting to Q' = 4Z intersects the Q-part.
  AbelianSubgroup q4 = AbelianSubgroup::from_generators(g.qgroup(), {g.qgroup().element({4})});
  EmpiricalMeasure res = restrict_measure(mu, q4);
  for (const auto& atom : res.atoms()) CHECK(atom.subgroup.qpart() == q4);

  // delta_H restricted to N keeps exactly N_H.
  EmpiricalMeasure resn = restrict_measure(mu, AbelianSubgroup::trivial(g.qgroup()));
  for (const auto& atom : resn.atoms()) {
    CHECK(atom.subgroup.qpart() == AbelianSubgroup::trivial(g.qgroup()));
    CHECK(atom.subgroup.npart() == h.npart());
  }
}

TEST_CASE("pushforward matches brute force on a finite quotient") {
  WreathGroup w = regular_finite_wreath({2}, {2});
  std::vector<GroupElement> everyone = w.all_elements();
  for (const auto& k : enumerate_triplets(w)) {
    EmpiricalMeasure mu = empirical_measure(everyone, k);
    auto pushed = pushforward_to_q(mu);
    Rat total = 0;
    for (const auto& [q, wgt] : pushed) {
      CHECK(q == k.qpart());  // Q abelian: conjugation preserves the projection
      total += wgt;
    }
    CHECK(total == 1);
  }
}
