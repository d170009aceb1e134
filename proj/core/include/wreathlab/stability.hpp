#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wreathlab/wreath.hpp"

namespace wreathlab {

class Permutation {
 public:
  Permutation() = default;
  static Permutation identity(std::size_t n);
  explicit Permutation(std::vector<std::uint32_t> images);

  std::size_t degree() const { return images_.size(); }
  std::uint32_t operator()(std::uint32_t x) const { return images_[x]; }

  /// (a * b)(x) = a(b(x)).
  Permutation compose(const Permutation& other) const;
  Permutation inverse() const;
  std::size_t fixed_points() const;
  bool is_identity() const;

  bool operator==(const Permutation& o) const { return images_ == o.images_; }

 private:
  std::vector<std::uint32_t> images_;
};

/// d_n(sigma, tau) = 1 - |Fix(sigma^{-1} tau)| / n, exact.
Rat hamming(const Permutation& a, const Permutation& b);

struct GeneratorAssignment {
  std::size_t degree = 0;
  std::vector<std::string> names;  // generator order
  std::map<std::string, Permutation> perms;

  const Permutation& at(const std::string& name) const;
};

/// The left action of the named generators on the cosets of K, by BFS
/// enumeration with canonical first-discovered representatives. The result
/// is an exact homomorphism of degree [G : K].
GeneratorAssignment coset_action(const GoursatTriplet& k,
                                 const std::vector<std::pair<std::string, GroupElement>>& gens,
                                 std::uint64_t index_bound = 100000);

/// A word is a sequence of (generator name, exponent) letters, multiplied
/// left to right.
using Word = std::vector<std::pair<std::string, std::int64_t>>;

Word word_inverse(const Word& w);
/// x^y = y^{-1} x y.
Word word_conjugate(const Word& x, const Word& y);
/// [x, y] = y^{-1} x y x^{-1}.
Word word_commutator(const Word& x, const Word& y);
/// Total occurrences of a generator (counting inverses and exponents).
std::int64_t word_occurrences(const Word& w, const std::string& name);

Permutation evaluate_word(const GeneratorAssignment& assignment, const Word& w);

struct DefectRow {
  std::string label;
  Rat defect;
};

struct DefectReport {
  std::vector<DefectRow> rows;
  Rat max_defect;
};

DefectReport relation_defect(const GeneratorAssignment& assignment,
                             const std::vector<std::pair<std::string, Word>>& words);

/// The lamplighter-relation demonstration: the regular action of Z/2 wr Z/k
/// gives exact witnesses b, t for the relations [b, b^{t^j}] = id, and a
/// perturbed pair measures how far an almost-solution sits from them.
struct StabilityDemoReport {
  std::size_t degree = 0;
  unsigned k = 0;
  unsigned j_max = 0;
  unsigned perturbations = 0;
  std::uint64_t seed = 0;
  bool witness_exact = false;          // all relation defects of (b, t) vanish
  Rat distance_b;                      // d_n(b, beta)
  Rat distance_t;                      // d_n(t, tau)
  std::vector<DefectRow> exact_defects;
  std::vector<DefectRow> perturbed_defects;
  std::vector<DefectRow> lipschitz_bounds;  // 4 c_w P / n per word
  bool bounds_hold = false;
  Permutation witness_b;
  Permutation witness_t;
  Permutation perturbed_t;
};

StabilityDemoReport demo_cor_1_6(unsigned k, unsigned j_max, unsigned perturbations,
                                 std::uint64_t seed);

/// The lamplighter quotient Z/2 wr Z/k with its regular Q-set, plus the
/// standard generators b (lamp at the basepoint) and t (the Z/k shift).
struct LamplighterQuotient {
  WreathGroup group;
  GroupElement b;
  GroupElement t;
  GoursatTriplet trivial_subgroup;
};
LamplighterQuotient lamplighter_quotient(unsigned k);

}  // namespace wreathlab
