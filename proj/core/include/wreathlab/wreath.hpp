#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wreathlab/perm_module.hpp"

namespace wreathlab {

/// An element (q, n) of G = Q ⋉ B^X, components canonical.
struct GroupElement {
  AbelianElement q;
  ModuleElement n;

  auto operator<=>(const GroupElement&) const = default;
};

/// The split permutational wreath product G = B wr_X Q = Q ⋉ B^X.
class WreathGroup {
 public:
  WreathGroup() = default;
  WreathGroup(FgAbelianGroup q, FgAbelianGroup b, QSet x);

  const FgAbelianGroup& qgroup() const { return q_; }
  const FgAbelianGroup& base() const { return module_.base(); }
  const QSet& xset() const { return module_.xset(); }
  const PermModule& module() const { return module_; }

  GroupElement identity() const { return GroupElement{q_.zero(), module_.zero()}; }
  GroupElement make(AbelianElement q, ModuleElement n) const;
  GroupElement lift(const AbelianElement& q) const { return GroupElement{q_.reduce(q), {}}; }
  GroupElement embed(ModuleElement n) const { return GroupElement{q_.zero(), std::move(n)}; }

  /// (q1, n1)(q2, n2) = (q1 + q2, n1^{q2} + n2).
  GroupElement multiply(const GroupElement& a, const GroupElement& b) const;
  GroupElement inverse(const GroupElement& a) const;
  /// g^f = f^{-1} g f.
  GroupElement conjugate(const GroupElement& g, const GroupElement& f) const;
  /// [g, f] = g^{-1} g^f, the form satisfying g^f = g [g, f].
  GroupElement commutator(const GroupElement& g, const GroupElement& f) const;
  GroupElement power(const GroupElement& g, std::int64_t e) const;

  GroupIndex order() const;
  /// All elements of a finite G, sorted; throws when infinite.
  std::vector<GroupElement> all_elements() const;

  bool operator==(const WreathGroup& o) const { return q_ == o.q_ && module_ == o.module_; }

 private:
  FgAbelianGroup q_;
  PermModule module_;
};

/// A subgroup H <= G encoded as (Q_H, N_H, cocycle data). The alpha data is
/// stored on the canonical Hermite generators of Q_H with representatives
/// reduced mod N_H, so equal subgroups produce identical values.
class GoursatTriplet {
 public:
  GoursatTriplet() = default;

  /// Canonicalizes and validates; throws std::invalid_argument with the
  /// violation list when the data does not satisfy the triplet conditions.
  static GoursatTriplet make(const WreathGroup& g, AbelianSubgroup q_h, Submodule n_h,
                             std::vector<std::pair<AbelianElement, ModuleElement>> alpha);

  const WreathGroup& group() const { return group_; }
  const AbelianSubgroup& qpart() const { return q_h_; }
  const Submodule& npart() const { return n_h_; }
  /// Canonical generator lifts: alpha(g_j) = (g_j, a_j) N_H.
  const std::vector<std::pair<AbelianElement, ModuleElement>>& alpha() const { return alpha_; }

  /// a_q accumulated deterministically from the canonical generators.
  /// Requires q in Q_H.
  ModuleElement cocycle(const AbelianElement& q) const;
  /// The lift (q, a_q).
  GroupElement lift(const AbelianElement& q) const;

  std::string canonical_key() const;
  bool operator==(const GoursatTriplet& o) const { return canonical_key() == o.canonical_key(); }

 private:
  WreathGroup group_;
  AbelianSubgroup q_h_;
  Submodule n_h_;
  std::vector<std::pair<AbelianElement, ModuleElement>> alpha_;
};

/// The triplet axioms on raw data: N_H-invariance under each generator,
/// commutation cocycles, and the relation words of Q_H landing in N_H.
/// Returns a list of human-readable violations, empty when valid.
std::vector<std::string> triplet_violations(
    const WreathGroup& g, const AbelianSubgroup& q_h, const Submodule& n_h,
    const std::vector<std::pair<AbelianElement, ModuleElement>>& alpha);

bool triplet_contains(const GoursatTriplet& h, const GroupElement& g);

GoursatTriplet triplet_conjugate(const GoursatTriplet& h, const GroupElement& g);

GroupIndex triplet_index(const GoursatTriplet& h);

/// g^f in H via the split-form criterion: q in Q_H and
/// [g, f] + (n - a_q) in N_H. Always agrees with membership of the
/// conjugate computed directly.
bool conjugate_membership(const GroupElement& g, const GroupElement& f, const GoursatTriplet& h);

/// N_N(H) = {m in N : m - m^{g_j} in N_H for all generators}.
Submodule normalizer_in_module(const GoursatTriplet& h);
GroupIndex normalizer_index_in_module(const GoursatTriplet& h);

/// E^Z: module elements supported in Z with every value inside the box E.
class BoxPower {
 public:
  BoxPower() = default;
  BoxPower(PermModule mod, Box e, std::vector<XPoint> z);

  const PermModule& module() const { return mod_; }
  const Box& value_box() const { return e_; }
  const std::vector<XPoint>& window() const { return z_; }

  Int size() const;
  bool contains(const ModuleElement& n) const;
  ModuleElement sample(Rng& rng) const;
  std::vector<ModuleElement> elements(std::uint64_t limit = (1u << 24)) const;
  /// True when E covers all of B, making E^Z the subgroup B^Z.
  bool is_subgroup() const;

 private:
  PermModule mod_;
  Box e_;
  std::vector<XPoint> z_;
};

/// F = Î · T, the product of a lifted transversal in Q and a transversal of
/// the module part. Supports exact iteration below a bound and exactly
/// uniform seeded sampling always.
class ProductTransversal {
 public:
  ProductTransversal() = default;
  ProductTransversal(WreathGroup g, std::vector<AbelianElement> i_set, BoxPower t);
  ProductTransversal(WreathGroup g, std::vector<AbelianElement> i_set,
                     std::vector<ModuleElement> t_elements);

  const WreathGroup& group() const { return group_; }
  const std::vector<AbelianElement>& i_set() const { return i_; }
  bool structured() const { return explicit_t_.empty(); }
  const BoxPower& t_box() const { return t_; }
  const std::vector<ModuleElement>& t_elements() const { return explicit_t_; }

  Int size() const;
  bool contains(const GroupElement& g) const;
  std::vector<GroupElement> elements(std::uint64_t limit = (1u << 24)) const;
  GroupElement sample(Rng& rng) const;

 private:
  WreathGroup group_;
  std::vector<AbelianElement> i_;
  BoxPower t_;
  std::vector<ModuleElement> explicit_t_;
};

}  // namespace wreathlab
