#include "wreathlab/fg_abelian.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace wreathlab {

namespace {

lat::Vec lift(const AbelianElement& e) {
  lat::Vec v(e.coords.size());
  for (std::size_t i = 0; i < e.coords.size(); ++i) v[i] = e.coords[i];
  return v;
}

AbelianElement lower(const FgAbelianGroup& q, const lat::Vec& v) {
  AbelianElement e;
  e.coords.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) e.coords[i] = static_cast<std::int64_t>(v[i]);
  return q.reduce(std::move(e));
}

}  // namespace

FgAbelianGroup::FgAbelianGroup(std::size_t free_rank, std::vector<std::int64_t> torsion_moduli,
                               std::vector<std::string> basis_labels)
    : free_rank_(free_rank), torsion_(std::move(torsion_moduli)), labels_(std::move(basis_labels)) {
  for (std::size_t j = 0; j < torsion_.size(); ++j) {
    if (torsion_[j] < 2) throw std::invalid_argument("torsion modulus must be >= 2");
    if (j > 0 && torsion_[j] % torsion_[j - 1] != 0)
      throw std::invalid_argument("torsion moduli must divide in sequence");
  }
  if (labels_.empty()) {
    for (std::size_t i = 0; i < free_rank_; ++i) labels_.push_back("s" + std::to_string(i));
  }
  if (labels_.size() != free_rank_) throw std::invalid_argument("one label per free generator");
  std::set<std::string> distinct(labels_.begin(), labels_.end());
  if (distinct.size() != labels_.size()) throw std::invalid_argument("labels must be distinct");
}

std::vector<std::int64_t> FgAbelianGroup::coordinate_moduli() const {
  std::vector<std::int64_t> m(rank(), 0);
  for (std::size_t j = 0; j < torsion_.size(); ++j) m[free_rank_ + j] = torsion_[j];
  return m;
}

lat::Mat FgAbelianGroup::relation_columns() const {
  lat::Mat rel;
  for (std::size_t j = 0; j < torsion_.size(); ++j) {
    lat::Vec col(rank(), 0);
    col[free_rank_ + j] = torsion_[j];
    rel.push_back(std::move(col));
  }
  return rel;
}

AbelianElement FgAbelianGroup::element(std::vector<std::int64_t> coords) const {
  if (coords.size() != rank()) throw std::invalid_argument("element length does not match group");
  return reduce(AbelianElement{std::move(coords)});
}

AbelianElement FgAbelianGroup::reduce(AbelianElement e) const {
  if (e.coords.size() != rank()) throw std::invalid_argument("element length does not match group");
  for (std::size_t j = 0; j < torsion_.size(); ++j) {
    auto& c = e.coords[free_rank_ + j];
    c = mod_reduce_i64(c, torsion_[j]);
  }
  return e;
}

AbelianElement FgAbelianGroup::add(const AbelianElement& a, const AbelianElement& b) const {
  AbelianElement r = a;
  for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] += b.coords[i];
  return reduce(std::move(r));
}

AbelianElement FgAbelianGroup::sub(const AbelianElement& a, const AbelianElement& b) const {
  AbelianElement r = a;
  for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] -= b.coords[i];
  return reduce(std::move(r));
}

AbelianElement FgAbelianGroup::neg(const AbelianElement& a) const {
  AbelianElement r = a;
  for (auto& c : r.coords) c = -c;
  return reduce(std::move(r));
}

AbelianElement FgAbelianGroup::scale(const AbelianElement& a, std::int64_t c) const {
  AbelianElement r = a;
  for (auto& x : r.coords) x *= c;
  return reduce(std::move(r));
}

std::int64_t FgAbelianGroup::seminorm(const AbelianElement& a) const {
  std::int64_t n = 0;
  for (std::size_t i = 0; i < free_rank_; ++i) n = std::max(n, std::abs(a.coords[i]));
  return n;
}

GroupIndex FgAbelianGroup::order() const {
  if (free_rank_ > 0) return GroupIndex::infinite();
  Int o = 1;
  for (auto m : torsion_) o *= m;
  return GroupIndex::of(o);
}

AbelianSubgroup AbelianSubgroup::trivial(const FgAbelianGroup& q) {
  return from_lattice(q, {});
}

AbelianSubgroup AbelianSubgroup::full(const FgAbelianGroup& q) {
  lat::Mat cols;
  for (std::size_t i = 0; i < q.rank(); ++i) {
    lat::Vec e(q.rank(), 0);
    e[i] = 1;
    cols.push_back(std::move(e));
  }
  return from_lattice(q, std::move(cols));
}

AbelianSubgroup AbelianSubgroup::from_generators(const FgAbelianGroup& q,
                                                 const std::vector<AbelianElement>& gens) {
  lat::Mat cols;
  for (const auto& g : gens) {
    if (g.coords.size() != q.rank()) throw std::invalid_argument("generator not in ambient group");
    cols.push_back(lift(g));
  }
  return from_lattice(q, std::move(cols));
}

AbelianSubgroup AbelianSubgroup::from_lattice(const FgAbelianGroup& q, lat::Mat columns) {
  auto rel = q.relation_columns();
  columns.insert(columns.end(), rel.begin(), rel.end());
  AbelianSubgroup s;
  s.ambient_ = q;
  s.hnf_ = lat::hermite(std::move(columns), q.rank());
  return s;
}

bool AbelianSubgroup::contains(const AbelianElement& e) const {
  return lat::contains(hnf_, lift(e));
}

AbelianElement AbelianSubgroup::residue(const AbelianElement& e) const {
  return lower(ambient_, lat::residue(hnf_, lift(e)));
}

GroupIndex AbelianSubgroup::index() const {
  auto det = lat::index_in_ambient(hnf_, ambient_.rank());
  if (!det) return GroupIndex::infinite();
  return GroupIndex::of(*det);
}

std::vector<AbelianElement> AbelianSubgroup::generators() const {
  std::vector<AbelianElement> gens;
  for (const auto& col : hnf_) {
    AbelianElement e = lower(ambient_, col);
    if (!e.is_zero()) gens.push_back(std::move(e));
  }
  return gens;
}

AbelianSubgroup sum_subgroups(const AbelianSubgroup& a, const AbelianSubgroup& b) {
  if (!(a.ambient() == b.ambient())) throw std::invalid_argument("subgroup sum: ambient mismatch");
  lat::Mat cols = a.lattice();
  const auto& bc = b.lattice();
  cols.insert(cols.end(), bc.begin(), bc.end());
  return AbelianSubgroup::from_lattice(a.ambient(), std::move(cols));
}

AbelianSubgroup intersect_subgroups(const AbelianSubgroup& a, const AbelianSubgroup& b) {
  if (!(a.ambient() == b.ambient()))
    throw std::invalid_argument("subgroup intersection: ambient mismatch");
  auto cols = lat::intersect(a.lattice(), b.lattice(), a.ambient().rank());
  return AbelianSubgroup::from_lattice(a.ambient(), std::move(cols));
}

AbelianSubgroup power_subgroup(const FgAbelianGroup& q, std::int64_t k) {
  if (k < 1) throw std::invalid_argument("power_subgroup requires k >= 1");
  lat::Mat cols;
  for (std::size_t i = 0; i < q.rank(); ++i) {
    lat::Vec e(q.rank(), 0);
    e[i] = k;
    cols.push_back(std::move(e));
  }
  return AbelianSubgroup::from_lattice(q, std::move(cols));
}

GroupIndex relative_index(const AbelianSubgroup& sup, const AbelianSubgroup& sub) {
  // Express sub's lattice in sup's basis; the quotient of the coefficient
  // lattices has the same order as sup/sub.
  lat::Mat coeffs;
  for (const auto& col : sub.lattice()) {
    auto y = lat::solve(sup.lattice(), col);
    if (!y) throw std::invalid_argument("relative_index: subgroups not nested");
    coeffs.push_back(std::move(*y));
  }
  auto h = lat::hermite(std::move(coeffs), sup.lattice().size());
  auto det = lat::index_in_ambient(h, sup.lattice().size());
  if (!det) return GroupIndex::infinite();
  return GroupIndex::of(*det);
}

std::vector<Int> solve_in_generators(const AbelianSubgroup& s,
                                     const std::vector<AbelianElement>& gens,
                                     const AbelianElement& q) {
  const auto& group = s.ambient();
  lat::Mat a;
  for (const auto& g : gens) a.push_back(lift(g));
  auto rel = group.relation_columns();
  a.insert(a.end(), rel.begin(), rel.end());

  lat::Mat u;
  lat::Mat h = lat::hermite_with_transform(a, group.rank(), u);
  // Strip trailing zero columns but keep transform alignment.
  lat::Mat h_nonzero;
  for (const auto& col : h) {
    bool zero = true;
    for (const auto& x : col) zero = zero && x == 0;
    if (!zero) h_nonzero.push_back(col);
  }
  auto y = lat::solve(h_nonzero, lift(q));
  if (!y) throw std::invalid_argument("solve_in_generators: element not in subgroup");
  // h = a * u with zero columns at the tail; pad y accordingly.
  lat::Vec y_full(h.size(), 0);
  for (std::size_t j = 0; j < y->size(); ++j) y_full[j] = (*y)[j];
  lat::Vec x = lat::mat_apply(u, y_full);

  // Canonicalize modulo the relation kernel of the generator map.
  lat::Mat ker = lat::kernel(a, group.rank());
  if (!ker.empty()) x = lat::residue(ker, std::move(x));
  return lat::Vec(x.begin(), x.begin() + gens.size());
}

lat::Mat relation_basis(const FgAbelianGroup& q, const std::vector<AbelianElement>& gens) {
  lat::Mat a;
  for (const auto& g : gens) a.push_back(lift(g));
  auto rel = q.relation_columns();
  a.insert(a.end(), rel.begin(), rel.end());
  lat::Mat ker = lat::kernel(a, q.rank());
  lat::Mat out;
  for (const auto& k : ker) out.push_back(lat::Vec(k.begin(), k.begin() + gens.size()));
  return lat::hermite(std::move(out), gens.size());
}

std::vector<AbelianElement> quotient_representatives(const AbelianSubgroup& s) {
  const auto& q = s.ambient();
  auto idx = s.index();
  if (!idx.is_finite()) throw std::invalid_argument("quotient_representatives: infinite index");
  // Full-rank Hermite form: residues are exactly the mixed-radix vectors
  // with pivot-row coordinates below the pivot.
  const auto& h = s.lattice();
  std::size_t n = q.rank();
  std::vector<std::int64_t> radix(n);
  std::size_t row = 0;
  for (std::size_t j = 0; j < h.size(); ++j) {
    while (row < n && h[j][row] == 0) ++row;
    radix[row] = static_cast<std::int64_t>(h[j][row]);
    ++row;
  }
  std::vector<AbelianElement> reps;
  std::vector<std::int64_t> digits(n, 0);
  while (true) {
    reps.push_back(AbelianElement{digits});
    std::size_t i = n;
    bool done = true;
    while (i > 0) {
      --i;
      if (++digits[i] < radix[i]) {
        done = false;
        break;
      }
      digits[i] = 0;
    }
    if (done) return reps;
  }
}

std::vector<AbelianElement> subgroup_elements(const AbelianSubgroup& s) {
  const auto& q = s.ambient();
  // Express the relation lattice in the subgroup basis and enumerate the
  // quotient of coefficient lattices.
  lat::Mat coeffs;
  for (const auto& col : q.relation_columns()) {
    auto y = lat::solve(s.lattice(), col);
    if (!y) throw std::logic_error("relation lattice not inside subgroup lattice");
    coeffs.push_back(std::move(*y));
  }
  std::size_t m = s.lattice().size();
  auto c = lat::hermite(std::move(coeffs), m);
  auto det = lat::index_in_ambient(c, m);
  if (!det) throw std::invalid_argument("subgroup_elements: subgroup is infinite");

  std::vector<std::int64_t> radix(m);
  std::size_t row = 0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    while (row < m && c[j][row] == 0) ++row;
    radix[row] = static_cast<std::int64_t>(c[j][row]);
    ++row;
  }
  std::vector<AbelianElement> elems;
  std::vector<std::int64_t> digits(m, 0);
  while (true) {
    lat::Vec v(q.rank(), 0);
    for (std::size_t j = 0; j < m; ++j) {
      if (digits[j] == 0) continue;
      for (std::size_t i = 0; i < q.rank(); ++i) v[i] += digits[j] * s.lattice()[j][i];
    }
    AbelianElement e;
    e.coords.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) e.coords[i] = static_cast<std::int64_t>(v[i]);
    elems.push_back(q.reduce(std::move(e)));
    std::size_t i = m;
    bool done = true;
    while (i > 0) {
      --i;
      if (++digits[i] < radix[i]) {
        done = false;
        break;
      }
      digits[i] = 0;
    }
    if (done) break;
  }
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  return elems;
}

GroupIndex subgroup_order(const AbelianSubgroup& s) {
  lat::Mat coeffs;
  for (const auto& col : s.ambient().relation_columns()) {
    auto y = lat::solve(s.lattice(), col);
    if (!y) throw std::logic_error("relation lattice not inside subgroup lattice");
    coeffs.push_back(std::move(*y));
  }
  std::size_t m = s.lattice().size();
  auto c = lat::hermite(std::move(coeffs), m);
  auto det = lat::index_in_ambient(c, m);
  if (!det) return GroupIndex::infinite();
  return GroupIndex::of(*det);
}

std::optional<Int> finite_to_one_multiplicity(const std::vector<AbelianElement>& f,
                                              const AbelianSubgroup& s) {
  auto idx = s.index();
  if (!idx.is_finite())
    throw std::invalid_argument("finite_to_one_multiplicity: infinite-index subgroup");
  if (f.empty()) return std::nullopt;
  std::map<AbelianElement, Int> counts;
  for (const auto& e : f) counts[s.residue(e)] += 1;
  if (Int(counts.size()) != idx.value()) return std::nullopt;
  const Int& mult = counts.begin()->second;
  for (const auto& [rep, c] : counts)
    if (c != mult) return std::nullopt;
  return mult;
}

Box::Box(FgAbelianGroup group, std::int64_t k) : group_(std::move(group)), k_(k) {
  if (k < 1) throw std::invalid_argument("box side must be >= 1");
}

Int Box::size() const {
  Int s = 1;
  for (std::size_t i = 0; i < group_.free_rank(); ++i) s *= k_;
  for (auto m : group_.torsion_moduli()) s *= m;
  return s;
}

bool Box::contains(const AbelianElement& e) const {
  for (std::size_t i = 0; i < group_.free_rank(); ++i) {
    if (e.coords[i] < free_min() || e.coords[i] > free_max()) return false;
  }
  return true;  // torsion coordinates are always inside
}

Int Box::translate_overlap(const AbelianElement& shift) const {
  Int count = 1;
  for (std::size_t i = 0; i < group_.free_rank(); ++i) {
    std::int64_t s = std::abs(shift.coords[i]);
    if (s >= k_) return 0;
    count *= (k_ - s);
  }
  for (auto m : group_.torsion_moduli()) count *= m;
  return count;
}

Int Box::reflect_overlap(const AbelianElement& r) const {
  Int count = 1;
  for (std::size_t i = 0; i < group_.free_rank(); ++i) {
    std::int64_t lo = std::max(free_min(), r.coords[i] - free_max());
    std::int64_t hi = std::min(free_max(), r.coords[i] - free_min());
    if (hi < lo) return 0;
    count *= (hi - lo + 1);
  }
  for (auto m : group_.torsion_moduli()) count *= m;
  return count;
}

std::vector<AbelianElement> Box::elements(std::size_t limit) const {
  if (size() > limit) throw std::invalid_argument("box too large to materialize");
  std::size_t n = group_.rank();
  std::vector<std::int64_t> lo(n, 0), hi(n, 0);
  for (std::size_t i = 0; i < group_.free_rank(); ++i) {
    lo[i] = free_min();
    hi[i] = free_max();
  }
  const auto& tors = group_.torsion_moduli();
  for (std::size_t j = 0; j < tors.size(); ++j) hi[group_.free_rank() + j] = tors[j] - 1;

  std::vector<AbelianElement> out;
  std::vector<std::int64_t> cur = lo;
  while (true) {
    out.push_back(AbelianElement{cur});
    std::size_t i = n;
    bool done = true;
    while (i > 0) {
      --i;
      if (++cur[i] <= hi[i]) {
        done = false;
        break;
      }
      cur[i] = lo[i];
    }
    if (done) break;
  }
  return out;
}

AbelianElement Box::sample(Rng& rng) const {
  std::vector<std::int64_t> c(group_.rank());
  for (std::size_t i = 0; i < group_.free_rank(); ++i) c[i] = rng.range(free_min(), free_max());
  const auto& tors = group_.torsion_moduli();
  for (std::size_t j = 0; j < tors.size(); ++j)
    c[group_.free_rank() + j] = static_cast<std::int64_t>(rng.below(tors[j]));
  return AbelianElement{std::move(c)};
}

namespace {

// Least m >= 1 with m * (every generator of sup) inside sub.
std::int64_t least_exponent_into(const AbelianSubgroup& sup, const AbelianSubgroup& sub) {
  if (!(sup.ambient() == sub.ambient()))
    throw std::invalid_argument("least_exponent_into: ambient mismatch");
  GroupIndex bound = relative_index(sup, intersect_subgroups(sup, sub));
  if (!bound.is_finite()) throw std::logic_error("least_exponent_into: infinite index");
  std::int64_t limit = static_cast<std::int64_t>(bound.value());
  for (std::int64_t m = 1; m <= limit; ++m) {
    bool ok = true;
    for (const auto& col : sup.lattice()) {
      lat::Vec scaled = col;
      for (auto& x : scaled) x *= m;
      if (!lat::contains(sub.lattice(), scaled)) {
        ok = false;
        break;
      }
    }
    if (ok) return m;
  }
  throw std::logic_error("least_exponent_into: exponent exceeds index bound");
}

}  // namespace

DecompositionScheme decompose(const FgAbelianGroup& q, const AbelianSubgroup& r,
                              const std::vector<AbelianSubgroup>& stabilizers) {
  std::size_t n = q.rank();
  // U = saturation of R + torsion; V a complementary free summand.
  lat::Mat rt = r.lattice();
  for (std::size_t j = 0; j < q.torsion_moduli().size(); ++j) {
    lat::Vec e(n, 0);
    e[q.free_rank() + j] = 1;
    rt.push_back(std::move(e));
  }
  auto sat = lat::saturate(rt, n);
  lat::Mat u_cols(sat.basis.begin(), sat.basis.begin() + sat.rank);
  lat::Mat v_cols(sat.basis.begin() + sat.rank, sat.basis.end());

  DecompositionScheme scheme;
  scheme.R = r;
  scheme.U = AbelianSubgroup::from_lattice(q, u_cols);
  scheme.V = AbelianSubgroup::from_lattice(q, v_cols);
  scheme.m = least_exponent_into(scheme.U, r);

  // Projection onto the V-coordinates in the saturate basis.
  lat::Mat basis_u;  // transform for solving P * c = v
  lat::Mat basis_h = lat::hermite_with_transform(sat.basis, n, basis_u);
  auto v_coords = [&](const AbelianElement& e) {
    auto y = lat::solve(basis_h, lift(e));
    if (!y) throw std::logic_error("decompose: saturate basis is not a basis");
    lat::Vec c = lat::mat_apply(basis_u, *y);
    return lat::Vec(c.begin() + sat.rank, c.end());
  };

  std::size_t nv = n - sat.rank;
  for (const auto& stab : stabilizers) {
    lat::Mat c_l;
    for (const auto& g : stab.generators()) c_l.push_back(v_coords(g));
    auto sat_l = lat::saturate(c_l, nv);
    lat::Mat w_cols, wp_cols;
    for (std::size_t j = 0; j < nv; ++j) {
      // Map the V-coordinate basis vector back to Z^n.
      lat::Vec full(n, 0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < nv; ++t)
          full[i] += sat_l.basis[j][t] * v_cols[t][i];
      if (j < sat_l.rank)
        w_cols.push_back(std::move(full));
      else
        wp_cols.push_back(std::move(full));
    }
    scheme.W.push_back(AbelianSubgroup::from_lattice(q, w_cols));
    scheme.Wp.push_back(AbelianSubgroup::from_lattice(q, wp_cols));
    auto uw = sum_subgroups(scheme.U, scheme.W.back());
    auto rs = sum_subgroups(r, stab);
    scheme.m_l.push_back(least_exponent_into(uw, rs));
  }

  scheme.k = scheme.m;
  for (auto ml : scheme.m_l) scheme.k = std::lcm(scheme.k, ml);
  return scheme;
}

}  // namespace wreathlab
