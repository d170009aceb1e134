#include "doctest.h"
#include "test_helpers.hpp"
#include "wreathlab/rng.hpp"
#include "wreathlab/stability.hpp"

using namespace wreathlab;
using namespace wreathlab::testing;

namespace {

Permutation random_perm(std::size_t n, Rng& rng) {
  std::vector<std::uint32_t> im(n);
  for (std::size_t i = 0; i < n; ++i) im[i] = static_cast<std::uint32_t>(i);
  for (std::size_t i = n; i > 1; --i) std::swap(im[i - 1], im[rng.below(i)]);
  return Permutation(std::move(im));
}

}  // namespace

TEST_CASE("hamming metric") {
  Permutation id = Permutation::identity(4);
  CHECK(hamming(id, id) == 0);
  // A transposition moves two of four points.
  Permutation swap01({1, 0, 2, 3});
  CHECK(hamming(swap01, id) == Rat(1, 2));

  // Metric axioms exhaustively on S(4): enumerate via repeated shuffles.
  Rng rng(1);
  std::vector<Permutation> s4;
  for (int t = 0; t < 200; ++t) s4.push_back(random_perm(4, rng));
  for (int t = 0; t < 200; ++t) {
    const Permutation& a = s4[rng.below(s4.size())];
    const Permutation& b = s4[rng.below(s4.size())];
    const Permutation& c = s4[rng.below(s4.size())];
    CHECK((hamming(a, b) == 0) == (a == b));
    CHECK(hamming(a, b) == hamming(b, a));
    CHECK(hamming(a, c) <= hamming(a, b) + hamming(b, c));
    // Bi-invariance.
    CHECK(hamming(c.compose(a), c.compose(b)) == hamming(a, b));
    CHECK(hamming(a.compose(c), b.compose(c)) == hamming(a, b));
  }

  // Fuzzed bi-invariance on S(64).
  for (int t = 0; t < 200; ++t) {
    Permutation a = random_perm(64, rng), b = random_perm(64, rng), p = random_perm(64, rng),
                r = random_perm(64, rng);
    CHECK(hamming(p.compose(a).compose(r), p.compose(b).compose(r)) == hamming(a, b));
  }
}

TEST_CASE("coset action basics") {
  WreathGroup g = lamplighter();

  // K = G (full group): degree 1.
  GoursatTriplet whole = GoursatTriplet::make(
      g, AbelianSubgroup::full(g.qgroup()),
      Submodule::laurent(g.module(), PolyFp{2, {1}}),
      {{g.qgroup().element({1}), g.module().zero()}});
  auto deg1 = coset_action(whole, {{"b", lamp(g, 0)}, {"t", shift(g, 1)}});
  CHECK(deg1.degree == 1);

  // K = 2Z x N: two cosets by the parity of the shift; b acts trivially.
  GoursatTriplet parity = GoursatTriplet::make(
      g, AbelianSubgroup::from_generators(g.qgroup(), {g.qgroup().element({2})}),
      Submodule::laurent(g.module(), PolyFp{2, {1}}),
      {{g.qgroup().element({2}), g.module().zero()}});
  auto deg2 = coset_action(parity, {{"b", lamp(g, 0)}, {"t", shift(g, 1)}});
  CHECK(deg2.degree == 2);
  CHECK(deg2.at("b").is_identity());
  CHECK(!deg2.at("t").is_identity());
  CHECK(deg2.at("t").compose(deg2.at("t")).is_identity());

  // Infinite index refused.
  CHECK_THROWS_AS(coset_action(ideal_subgroup(g, {1, 1}), {{"t", shift(g, 1)}}),
                  std::invalid_argument);
  // Index bound respected.
  CHECK_THROWS_AS(coset_action(shortcut_subgroup(g), {{"t", shift(g, 1)}}, 4),
                  std::invalid_argument);
}

TEST_CASE("coset action is a homomorphism") {
  LamplighterQuotient lq = lamplighter_quotient(3);
  auto assignment = coset_action(lq.trivial_subgroup, {{"b", lq.b}, {"t", lq.t}});
  CHECK(assignment.degree == 24);

  // Verify against the multiplication table: the regular action of
  // generators composed in words matches the action of the product.
  const auto& g = lq.group;
  Rng rng(6);
  std::vector<std::pair<Word, GroupElement>> dictionary = {
      {{{"b", 1}}, lq.b},
      {{{"t", 1}}, lq.t},
      {{{"t", 1}, {"b", 1}}, g.multiply(lq.t, lq.b)},
      {{{"b", -1}, {"t", 2}}, g.multiply(g.inverse(lq.b), g.power(lq.t, 2))},
  };
  for (int trial = 0; trial < 200; ++trial) {
    const auto& [w1, g1] = dictionary[rng.below(dictionary.size())];
    const auto& [w2, g2] = dictionary[rng.below(dictionary.size())];
    Word concat = w1;
    concat.insert(concat.end(), w2.begin(), w2.end());
    Permutation lhs = evaluate_word(assignment, concat);
    Permutation rhs = evaluate_word(assignment, w1).compose(evaluate_word(assignment, w2));
    CHECK(lhs == rhs);
    (void)g1;
    (void)g2;
  }

  // Degree equals the index.
  CHECK(Int(assignment.degree) == triplet_index(lq.trivial_subgroup).value());
}

TEST_CASE("word evaluation") {
  LamplighterQuotient lq = lamplighter_quotient(4);
  auto assignment = coset_action(lq.trivial_subgroup, {{"b", lq.b}, {"t", lq.t}});

  CHECK(evaluate_word(assignment, {}).is_identity());
  CHECK(evaluate_word(assignment, {{"t", 1}, {"t", -1}}).is_identity());
  CHECK_THROWS_AS(evaluate_word(assignment, {{"x", 1}}), std::invalid_argument);

  // [b, b^{t}] = id in the quotient.
  Word wb{{"b", 1}};
  Word conj = word_conjugate(wb, {{"t", 1}});
  CHECK(evaluate_word(assignment, word_commutator(wb, conj)).is_identity());
}

TEST_CASE("relation defects and the regular witness") {
  LamplighterQuotient lq = lamplighter_quotient(4);
  auto assignment = coset_action(lq.trivial_subgroup, {{"b", lq.b}, {"t", lq.t}});
  std::vector<std::pair<std::string, Word>> words;
  for (int j = 1; j <= 12; ++j) {
    Word wb{{"b", 1}};
    words.emplace_back("j" + std::to_string(j),
                       word_commutator(wb, word_conjugate(wb, {{"t", j}})));
  }
  DefectReport rep = relation_defect(assignment, words);
  CHECK(rep.max_defect == 0);
}

TEST_CASE("demo: exact pair and perturbed pair") {
  // No perturbation: distances and defects all vanish.
  StabilityDemoReport clean = demo_cor_1_6(4, 12, 0, 5);
  CHECK(clean.degree == 64);
  CHECK(clean.witness_exact);
  CHECK(clean.distance_b == 0);
  CHECK(clean.distance_t == 0);
  for (const auto& row : clean.perturbed_defects) CHECK(row.defect == 0);
  CHECK(clean.bounds_hold);

  // One transposition on tau: distance exactly 2/64, defects within bounds.
  StabilityDemoReport one = demo_cor_1_6(4, 12, 1, 5);
  CHECK(one.distance_t == Rat(2, 64));
  CHECK(one.distance_b == 0);
  CHECK(one.witness_exact);
  CHECK(one.bounds_hold);
  for (std::size_t i = 0; i < one.perturbed_defects.size(); ++i)
    CHECK(one.perturbed_defects[i].defect <= one.lipschitz_bounds[i].defect);

  // k = 3 with deep relations: the exact pair satisfies all of them.
  StabilityDemoReport k3 = demo_cor_1_6(3, 9, 0, 1);
  CHECK(k3.witness_exact);
}

TEST_CASE("relation defects scale with the occurrence count") {
  // Perturbing tau by one transposition changes each letter by at most 2/n;
  // the word map is Lipschitz with the occurrence count as constant.
  StabilityDemoReport rep = demo_cor_1_6(4, 8, 1, 42);
  for (std::size_t i = 0; i < rep.perturbed_defects.size(); ++i) {
    // Bound from the report: 4 * c_w / n with c_w = t-occurrences = 4j.
    CHECK(rep.lipschitz_bounds[i].defect ==
          Rat(Int(4 * 4 * static_cast<std::int64_t>(i + 1)), Int(64)));
    CHECK(rep.perturbed_defects[i].defect <= rep.lipschitz_bounds[i].defect);
  }
}
