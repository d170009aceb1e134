#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wreathlab/wreath.hpp"

namespace wreathlab {

/// A dense, table-level model of B wr Q (regular action of a finite abelian
/// Q on itself) used as an independent oracle against the triplet machinery.
/// Elements are raw coordinate vectors and all arithmetic is index juggling;
/// nothing here goes through lattices or submodule representations.
class FiniteWreathModel {
 public:
  FiniteWreathModel(std::vector<std::int64_t> q_moduli, std::vector<std::int64_t> b_moduli);

  // Element layout: [q coords | values, point-major], one B-block per point.
  using Elem = std::vector<std::int64_t>;

  std::size_t q_order() const { return q_order_; }
  std::size_t b_order() const { return b_order_; }
  std::size_t order() const;

  Elem identity() const;
  Elem multiply(const Elem& a, const Elem& b) const;
  Elem inverse(const Elem& a) const;
  Elem conjugate(const Elem& g, const Elem& f) const;  // f^{-1} g f

  std::vector<Elem> all_elements() const;
  /// Every subgroup, each as a sorted element list. Closure-based BFS.
  std::vector<std::vector<Elem>> all_subgroups() const;

  const std::vector<std::int64_t>& q_moduli() const { return q_moduli_; }
  const std::vector<std::int64_t>& b_moduli() const { return b_moduli_; }

 private:
  std::size_t point_of(const std::vector<std::int64_t>& q_coords) const;

  std::vector<std::int64_t> q_moduli_;
  std::vector<std::int64_t> b_moduli_;
  std::size_t q_order_ = 1;
  std::size_t b_order_ = 1;
};

struct AuditReport {
  bool ok = false;
  std::size_t brute_subgroups = 0;
  std::size_t triplet_subgroups = 0;
  std::vector<std::string> mismatches;
};

/// Brute-force subgroup enumeration of the finite quotient versus validated
/// Goursat triplets: counts, memberships, indices and conjugates must agree
/// exactly. `inject_fault` flips one membership for negative-control tests.
AuditReport goursat_audit(const std::vector<std::int64_t>& q_moduli,
                          const std::vector<std::int64_t>& b_moduli,
                          std::size_t order_bound = 10000, bool inject_fault = false);

/// The library-side wreath group matching the model (regular finite action).
WreathGroup regular_finite_wreath(const std::vector<std::int64_t>& q_moduli,
                                  const std::vector<std::int64_t>& b_moduli);

/// All validated triplets of a finite wreath group, deduplicated canonically.
std::vector<GoursatTriplet> enumerate_triplets(const WreathGroup& g);

}  // namespace wreathlab
