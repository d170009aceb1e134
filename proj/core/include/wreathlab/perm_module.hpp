#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wreathlab/fg_abelian.hpp"
#include "wreathlab/polynomial_fp.hpp"

namespace wreathlab {

class QSet;

/// A point of the Q-set X: an orbit index together with the canonical
/// representative of its coset q S_l.
struct XPoint {
  std::size_t orbit = 0;
  AbelianElement coset;

  auto operator<=>(const XPoint&) const = default;
};

/// A Q-set with finitely many orbits, orbit l isomorphic to Q/S_l.
class QSet {
 public:
  QSet() = default;
  QSet(FgAbelianGroup q, std::vector<AbelianSubgroup> stabilizers,
       std::vector<std::string> basepoint_labels = {});

  const FgAbelianGroup& group() const { return group_; }
  std::size_t orbit_count() const { return stabilizers_.size(); }
  const AbelianSubgroup& stabilizer(std::size_t l) const { return stabilizers_[l]; }
  const std::vector<std::string>& labels() const { return labels_; }

  XPoint point(std::size_t orbit, const AbelianElement& coset) const;
  XPoint basepoint(std::size_t l) const { return point(l, group_.zero()); }
  XPoint act(const AbelianElement& q, const XPoint& x) const;

  GroupIndex orbit_size(std::size_t l) const { return stabilizers_[l].index(); }
  GroupIndex size() const;
  bool is_finite() const;
  /// All points; throws when X is infinite.
  std::vector<XPoint> all_points() const;

  bool operator==(const QSet& o) const {
    return group_ == o.group_ && stabilizers_ == o.stabilizers_;
  }

 private:
  FgAbelianGroup group_;
  std::vector<AbelianSubgroup> stabilizers_;
  std::vector<std::string> labels_;
};

/// A finitely supported element of B^X: canonical points mapped to nonzero
/// elements of B.
class ModuleElement {
 public:
  ModuleElement() = default;

  const std::map<XPoint, AbelianElement>& support() const { return support_; }
  bool is_zero() const { return support_.empty(); }
  std::size_t support_size() const { return support_.size(); }

  auto operator<=>(const ModuleElement&) const = default;

  // Raw insert of a canonical (point, nonzero value) pair; used by PermModule.
  void set_raw(XPoint x, AbelianElement v) { support_.emplace(std::move(x), std::move(v)); }

 private:
  std::map<XPoint, AbelianElement> support_;
};

/// The permutational module N = B^X with its Q-action by coordinate
/// permutation; the action convention is (n^q)(x) = n(q x).
class PermModule {
 public:
  PermModule() = default;
  PermModule(QSet x, FgAbelianGroup base);

  const QSet& xset() const { return x_; }
  const FgAbelianGroup& base() const { return base_; }

  ModuleElement zero() const { return ModuleElement(); }
  ModuleElement delta(const XPoint& x, const AbelianElement& value) const;
  ModuleElement from_pairs(const std::vector<std::pair<XPoint, AbelianElement>>& pairs) const;

  AbelianElement value_at(const ModuleElement& n, const XPoint& x) const;
  ModuleElement add(const ModuleElement& a, const ModuleElement& b) const;
  ModuleElement sub(const ModuleElement& a, const ModuleElement& b) const;
  ModuleElement neg(const ModuleElement& a) const;
  ModuleElement scale(const ModuleElement& a, std::int64_t c) const;
  ModuleElement act(const AbelianElement& q, const ModuleElement& n) const;

  GroupIndex order() const;

  bool operator==(const PermModule& o) const { return x_ == o.x_ && base_ == o.base_; }

 private:
  QSet x_;
  FgAbelianGroup base_;
};

/// Z_i = disjoint union of I x_l over the orbits, deduplicated, sorted.
std::vector<XPoint> window_points(const std::vector<AbelianElement>& i_set, const QSet& x);

/// The Q-factor map X -> V\X induced by a subgroup V <= Q; target stabilizers
/// are S_l + V.
class FactorMap {
 public:
  FactorMap() = default;
  FactorMap(PermModule source, AbelianSubgroup v);

  const PermModule& source() const { return source_; }
  const PermModule& target() const { return target_; }
  const AbelianSubgroup& kernel_subgroup() const { return v_; }

  XPoint push_point(const XPoint& x) const;
  ModuleElement push(const ModuleElement& n) const;

  /// Canonical section: the target representative reinterpreted in X.
  XPoint section_point(const XPoint& xbar) const;
  ModuleElement section(const ModuleElement& nbar) const;

  /// Unique preimage supported in the transversal Y (given explicitly).
  /// Throws std::invalid_argument when Y is not a transversal of the fibers.
  ModuleElement pull_within(const ModuleElement& nbar, const std::vector<XPoint>& y) const;

  bool operator==(const FactorMap& o) const { return source_ == o.source_ && v_ == o.v_; }

 private:
  PermModule source_;
  AbelianSubgroup v_;
  PermModule target_;
};

/// An integer lattice sitting inside the coordinates B^W for a finite set of
/// points W. Used both for submodules of B^X with X finite (W = X) and for
/// windowed intersections N_H ∩ B^W.
class WindowLattice {
 public:
  WindowLattice() = default;
  WindowLattice(PermModule mod, std::vector<XPoint> window, lat::Mat columns);

  static WindowLattice zero(const PermModule& mod, std::vector<XPoint> window);
  static WindowLattice full(const PermModule& mod, std::vector<XPoint> window);
  static WindowLattice from_elements(const PermModule& mod, std::vector<XPoint> window,
                                     const std::vector<ModuleElement>& gens);

  const PermModule& module() const { return mod_; }
  const std::vector<XPoint>& window() const { return window_; }
  const lat::Mat& lattice() const { return hnf_; }
  std::size_t dim() const { return window_.size() * mod_.base().rank(); }

  std::optional<lat::Vec> flatten(const ModuleElement& n) const;
  ModuleElement unflatten(const lat::Vec& v) const;

  /// Membership: support inside the window and coordinates in the lattice.
  bool contains(const ModuleElement& n) const;
  /// Canonical residue; requires support inside the window.
  ModuleElement reduce(const ModuleElement& n) const;

  GroupIndex index_in_window() const;
  std::vector<ModuleElement> generators() const;
  /// Canonical coset representatives of the lattice inside B^W; throws when
  /// the index is infinite.
  std::vector<ModuleElement> quotient_representatives() const;

  bool operator==(const WindowLattice& o) const {
    return window_ == o.window_ && hnf_ == o.hnf_;
  }

 private:
  PermModule mod_;
  std::vector<XPoint> window_;
  lat::Mat hnf_;
};

WindowLattice sum_window_lattices(const WindowLattice& a, const WindowLattice& b);
WindowLattice intersect_window_lattices(const WindowLattice& a, const WindowLattice& b);

/// Exact-membership representation of a submodule of N. Three variants:
///  - FiniteX: X finite, a lattice over all coordinates;
///  - LaurentIdeal: B = Z/p, X = Q = Z, a principal ideal of F_p[t^{+-1}];
///  - Pullback: the preimage of a FiniteX lattice under a factor map with
///    finite target.
class Submodule {
 public:
  enum class Kind { FiniteX, LaurentIdeal, Pullback };

  static Submodule finite_x(WindowLattice lattice_over_all_x);
  static Submodule laurent(const PermModule& mod, PolyFp generator);
  static Submodule laurent_from_generators(const PermModule& mod, std::vector<PolyFp> gens);
  static Submodule laurent_zero(const PermModule& mod);
  static Submodule pullback(FactorMap f, WindowLattice target_lattice);

  Kind kind() const { return kind_; }
  const PermModule& module() const;

  bool contains(const ModuleElement& n) const;
  GroupIndex index() const;
  bool invariant_under(const AbelianElement& q) const;
  /// Canonical coset representative of n + S.
  ModuleElement reduce(const ModuleElement& n) const;
  /// The image submodule S^q under the coordinate action.
  Submodule conjugated(const AbelianElement& q) const;

  /// S ∩ B^W as a window lattice. For LaurentIdeal, W must be a contiguous
  /// run of the orbit (box windows always are).
  WindowLattice intersect_window(const std::vector<XPoint>& window) const;

  /// {m : m - m^g in S for every listed g}.
  Submodule normalizer_in_module(const std::vector<AbelianElement>& qgens) const;

  /// Stable string form of the canonical data; equal submodules (same
  /// representation kind) produce equal keys.
  std::string canonical_key() const;

  bool operator==(const Submodule& o) const;

  // Variant accessors.
  const WindowLattice& finite_lattice() const { return finite_; }
  const PolyFp& laurent_generator() const { return gen_; }
  const FactorMap& factor_map() const { return fmap_; }
  const WindowLattice& pullback_lattice() const { return finite_; }

 private:
  Kind kind_ = Kind::FiniteX;
  PermModule mod_;
  WindowLattice finite_;  // FiniteX lattice, or the pullback's target lattice
  PolyFp gen_;
  FactorMap fmap_;
};

/// L + c * B^W over the same window (FiniteX-style lattices).
WindowLattice add_scaled_full(const WindowLattice& l, const Int& c);

/// The Hall-separation step: the least j (factorial schedule) such that
/// L + j! B^W agrees with L on the probe set T; the result is invariant under
/// the listed generators whenever L is.
Submodule separating_subgroup(const Submodule& finite_x, const std::vector<ModuleElement>& probes,
                              const std::vector<AbelianElement>& invariance_gens);

/// If the pullback submodule equals a Laurent ideal of its source module,
/// return the monic generator.
std::optional<PolyFp> laurent_equivalent(const Submodule& s);

}  // namespace wreathlab
