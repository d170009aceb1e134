#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wreathlab/wreath.hpp"

namespace wreathlab {

/// Deterministic radius-lexicographic enumeration g_1, g_2, ... of G. Every
/// element appears at the radius equal to the max of its Q-part seminorm,
/// the seminorms of its support points and the seminorms of its B-values.
/// All metric values are relative to this enumeration.
class Enumeration {
 public:
  explicit Enumeration(WreathGroup g, std::size_t cap = (1u << 20));

  /// g_n, 1-based.
  const GroupElement& element(std::size_t n);
  /// min(want, |G|) for finite groups; `want` otherwise.
  std::size_t usable_depth(std::size_t want);

  const WreathGroup& group() const { return g_; }

 private:
  void extend();

  WreathGroup g_;
  std::vector<GroupElement> list_;
  std::int64_t radius_ = -1;
  bool exhausted_ = false;
  std::size_t cap_;
};

/// All disjoint pairs (A_i, B_i) of finite subsets of {g_1, g_2, ...}: the
/// empty pair first, then for m = 1, 2, ... every pair using g_m, in
/// ascending ternary-counter order.
class PairEnumeration {
 public:
  explicit PairEnumeration(Enumeration& e) : enum_(&e) {}

  struct Pair {
    std::vector<GroupElement> a;
    std::vector<GroupElement> b;
  };

  const Pair& pair(std::size_t i);  // 1-based
  std::size_t usable_pairs(std::size_t want);

 private:
  void extend_block();

  Enumeration* enum_;
  std::vector<Pair> pairs_ = {Pair{}};  // pair 1 = (empty, empty)
  std::size_t block_m_ = 0;
  bool exhausted_ = false;
};

using MembershipOracle = std::function<bool(const GroupElement&)>;

/// Truncated power-set metric: sum over n <= depth of 1_{A Δ B}(g_n) / 2^n.
Rat d_pow(const MembershipOracle& a, const MembershipOracle& b, std::size_t depth,
          Enumeration& enumeration);

struct MeasureAtom {
  GoursatTriplet subgroup;
  Rat weight;
};

/// A finitely supported probability measure on canonical subgroup triplets.
class EmpiricalMeasure {
 public:
  EmpiricalMeasure() = default;
  static EmpiricalMeasure from_atoms(std::vector<MeasureAtom> atoms, bool estimated = false,
                                     std::uint64_t samples = 0, std::uint64_t seed = 0);

  const std::vector<MeasureAtom>& atoms() const { return atoms_; }
  bool estimated() const { return estimated_; }
  std::uint64_t samples() const { return samples_; }
  std::uint64_t seed() const { return seed_; }

  /// Total weight of E_{A,B} = {H : A ⊆ H, B ∩ H = ∅}.
  Rat e_ab_mass(const std::vector<GroupElement>& a, const std::vector<GroupElement>& b) const;

  bool operator==(const EmpiricalMeasure& o) const;

 private:
  std::vector<MeasureAtom> atoms_;
  bool estimated_ = false;
  std::uint64_t samples_ = 0;
  std::uint64_t seed_ = 0;
};

/// F * H: canonicalized conjugates f H f^{-1} with multiplicity weights.
EmpiricalMeasure empirical_measure(const std::vector<GroupElement>& f, const GoursatTriplet& h);
EmpiricalMeasure empirical_measure_mc(const ProductTransversal& f, const GoursatTriplet& h,
                                      std::uint64_t samples, std::uint64_t seed);

/// Truncated probability metric over the first `depth` pairs.
Rat d_prob(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, std::size_t depth,
           PairEnumeration& pairs);

/// p(g) = |{f in F : g^f in K Δ H}| / |F|.
Rat p_statistic_exact(const GroupElement& g, const GoursatTriplet& k, const GoursatTriplet& h,
                      const std::vector<GroupElement>& f);

struct McEstimate {
  Rat hit_fraction;
  double mean = 0.0;
  double stderr_ = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};
McEstimate p_statistic_mc(const GroupElement& g, const GoursatTriplet& k, const GoursatTriplet& h,
                          const ProductTransversal& f, std::uint64_t samples, std::uint64_t seed);

/// |gF Δ F| / |F| for an explicit finite set.
Rat folner_defect(const WreathGroup& grp, const std::vector<GroupElement>& f,
                  const GroupElement& g);
/// Same for F = Î · E^Z, computed from box-overlap products without
/// enumerating E^Z.
Rat folner_defect(const ProductTransversal& f, const GroupElement& g);

/// 1 - |{q in I : r in q + I}| / |I|.
Rat centered_defect(const Box& i, const AbelianElement& r);
Rat centered_defect(const std::vector<AbelianElement>& i, const AbelianElement& r,
                    const FgAbelianGroup& q);

/// |∪_{j<i} F_j^{-1} F_i| / |F_i| for the last set of the prefix.
Rat tempered_ratio(const WreathGroup& grp, const std::vector<std::vector<GroupElement>>& prefix);

/// Fraction of b in I with [g, b] + phi inside T for every phi.
Rat adapted_statistic(const BoxPower& t, const std::vector<AbelianElement>& i,
                      const GroupElement& g, const std::vector<ModuleElement>& phi,
                      const WreathGroup& grp);

/// Atom-wise restriction H ↦ H ∩ (Q' ⋉ N), aggregating weights.
EmpiricalMeasure restrict_measure(const EmpiricalMeasure& mu, const AbelianSubgroup& q_prime);

/// Atom-wise projection H ↦ Q_H with weight aggregation.
std::vector<std::pair<AbelianSubgroup, Rat>> pushforward_to_q(const EmpiricalMeasure& mu);

}  // namespace wreathlab
