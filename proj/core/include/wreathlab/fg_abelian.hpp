#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wreathlab/lattice.hpp"
#include "wreathlab/numeric.hpp"
#include "wreathlab/rng.hpp"

namespace wreathlab {

/// An element of a finitely generated abelian group, stored as one integer
/// per coordinate with torsion coordinates kept reduced into [0, m_j).
struct AbelianElement {
  std::vector<std::int64_t> coords;

  bool is_zero() const {
    for (auto c : coords)
      if (c != 0) return false;
    return true;
  }
  auto operator<=>(const AbelianElement&) const = default;
};

/// Q = Z^d  ⊕  Z/m_1 ⊕ ... ⊕ Z/m_t with m_1 | m_2 | ... | m_t.
class FgAbelianGroup {
 public:
  FgAbelianGroup() = default;
  FgAbelianGroup(std::size_t free_rank, std::vector<std::int64_t> torsion_moduli,
                 std::vector<std::string> basis_labels = {});

  std::size_t free_rank() const { return free_rank_; }
  const std::vector<std::int64_t>& torsion_moduli() const { return torsion_; }
  const std::vector<std::string>& basis_labels() const { return labels_; }
  std::size_t rank() const { return free_rank_ + torsion_.size(); }

  /// Per-coordinate modulus, 0 on free coordinates.
  std::vector<std::int64_t> coordinate_moduli() const;

  /// Columns m_j * e_{d+j}; every subgroup lattice contains these.
  lat::Mat relation_columns() const;

  AbelianElement zero() const { return AbelianElement{std::vector<std::int64_t>(rank(), 0)}; }
  AbelianElement element(std::vector<std::int64_t> coords) const;
  AbelianElement reduce(AbelianElement e) const;

  AbelianElement add(const AbelianElement& a, const AbelianElement& b) const;
  AbelianElement sub(const AbelianElement& a, const AbelianElement& b) const;
  AbelianElement neg(const AbelianElement& a) const;
  AbelianElement scale(const AbelianElement& a, std::int64_t c) const;

  /// max |n_sigma| over the free coordinates; 0 on torsion.
  std::int64_t seminorm(const AbelianElement& a) const;

  GroupIndex order() const;

  bool operator==(const FgAbelianGroup& o) const {
    return free_rank_ == o.free_rank_ && torsion_ == o.torsion_;
  }

 private:
  std::size_t free_rank_ = 0;
  std::vector<std::int64_t> torsion_;
  std::vector<std::string> labels_;
};

/// A subgroup of Q represented by the canonical Hermite basis of its preimage
/// lattice in Z^{d+t}. The lattice always contains the relation lattice, so
/// equal subgroups compare equal as values.
class AbelianSubgroup {
 public:
  static AbelianSubgroup trivial(const FgAbelianGroup& q);
  static AbelianSubgroup full(const FgAbelianGroup& q);
  static AbelianSubgroup from_generators(const FgAbelianGroup& q,
                                         const std::vector<AbelianElement>& gens);
  static AbelianSubgroup from_lattice(const FgAbelianGroup& q, lat::Mat columns);

  const FgAbelianGroup& ambient() const { return ambient_; }
  const lat::Mat& lattice() const { return hnf_; }

  bool contains(const AbelianElement& e) const;
  /// Canonical representative of the coset e + S.
  AbelianElement residue(const AbelianElement& e) const;

  GroupIndex index() const;

  /// Canonical generators: Hermite columns with nonzero image in Q.
  std::vector<AbelianElement> generators() const;

  bool operator==(const AbelianSubgroup& o) const {
    return ambient_ == o.ambient_ && hnf_ == o.hnf_;
  }

 private:
  FgAbelianGroup ambient_;
  lat::Mat hnf_;
};

AbelianSubgroup sum_subgroups(const AbelianSubgroup& a, const AbelianSubgroup& b);
AbelianSubgroup intersect_subgroups(const AbelianSubgroup& a, const AbelianSubgroup& b);

/// kQ, the subgroup generated by k-th powers. k >= 1.
AbelianSubgroup power_subgroup(const FgAbelianGroup& q, std::int64_t k);

/// [sup : sub] for nested subgroups; infinite when the quotient is.
GroupIndex relative_index(const AbelianSubgroup& sup, const AbelianSubgroup& sub);

/// Coefficients c with sum c_j gens_j == q in Q. Deterministic: the canonical
/// residue modulo the relation kernel of the generator map. Throws when q is
/// not in the span.
std::vector<Int> solve_in_generators(const AbelianSubgroup& s,
                                     const std::vector<AbelianElement>& gens,
                                     const AbelianElement& q);

/// Basis of the lattice of relations among `gens` in Q (vectors c with
/// sum c_j gens_j == 0).
lat::Mat relation_basis(const FgAbelianGroup& q, const std::vector<AbelianElement>& gens);

/// All canonical coset representatives of S in Q; throws if [Q:S] is infinite.
std::vector<AbelianElement> quotient_representatives(const AbelianSubgroup& s);

/// All elements of a finite subgroup; throws if S is infinite.
std::vector<AbelianElement> subgroup_elements(const AbelianSubgroup& s);

/// |S| as a group, finite or not.
GroupIndex subgroup_order(const AbelianSubgroup& s);

/// Multiplicity if the multiset F meets every coset of S the same number of
/// times (covering all cosets), empty otherwise. S must have finite index.
std::optional<Int> finite_to_one_multiplicity(const std::vector<AbelianElement>& f,
                                              const AbelianSubgroup& s);

/// The half-open cube {-ceil(k/2) < n_sigma <= floor(k/2)} on the free part
/// with arbitrary torsion part. Structured so that sizes, membership, overlap
/// counts and sampling never require materializing the elements.
class Box {
 public:
  Box() = default;
  Box(FgAbelianGroup group, std::int64_t k);

  const FgAbelianGroup& group() const { return group_; }
  std::int64_t side() const { return k_; }
  std::int64_t free_min() const { return -((k_ + 1) / 2) + 1; }
  std::int64_t free_max() const { return k_ / 2; }

  Int size() const;
  bool contains(const AbelianElement& e) const;

  /// |box ∩ (shift + box)|.
  Int translate_overlap(const AbelianElement& shift) const;
  /// |box ∩ (r - box)|, the centered-sequence count.
  Int reflect_overlap(const AbelianElement& r) const;

  /// Deterministic lexicographic enumeration (free coords ascending, then
  /// torsion). Throws if the size exceeds `limit`.
  std::vector<AbelianElement> elements(std::size_t limit = (1u << 22)) const;

  AbelianElement sample(Rng& rng) const;

 private:
  FgAbelianGroup group_;
  std::int64_t k_ = 1;
};

inline Box box(const FgAbelianGroup& q, std::int64_t k) { return Box(q, k); }

/// The structure-theorem data behind the stage construction: Q = U ⊕ V with
/// R of finite index in U, per-orbit splittings V = W_l ⊕ W'_l, and the
/// minimal exponents m, m_l with U[m] <= R and (U ⊕ W_l)[m_l] <= R + S_l.
struct DecompositionScheme {
  AbelianSubgroup R;
  AbelianSubgroup U;
  AbelianSubgroup V;
  std::vector<AbelianSubgroup> W;
  std::vector<AbelianSubgroup> Wp;
  std::int64_t m = 1;
  std::vector<std::int64_t> m_l;
  std::int64_t k = 1;
};

DecompositionScheme decompose(const FgAbelianGroup& q, const AbelianSubgroup& r,
                              const std::vector<AbelianSubgroup>& stabilizers);

}  // namespace wreathlab
