#include "wreathlab/chabauty.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace wreathlab {

namespace {

// Reduced elements of Q with free coordinates in [-r, r], sorted.
std::vector<AbelianElement> q_ball(const FgAbelianGroup& q, std::int64_t r) {
  std::size_t n = q.rank();
  std::vector<std::int64_t> lo(n, 0), hi(n, 0);
  for (std::size_t i = 0; i < q.free_rank(); ++i) {
    lo[i] = -r;
    hi[i] = r;
  }
  for (std::size_t j = 0; j < q.torsion_moduli().size(); ++j)
    hi[q.free_rank() + j] = q.torsion_moduli()[j] - 1;
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

}  // namespace

Enumeration::Enumeration(WreathGroup g, std::size_t cap) : g_(std::move(g)), cap_(cap) {}

void Enumeration::extend() {
  if (exhausted_) return;
  ++radius_;
  std::int64_t r = radius_;
  const auto& q = g_.qgroup();
  const auto& b = g_.base();
  const auto& x = g_.xset();

  std::vector<AbelianElement> qs = q_ball(q, r);

  // Canonical points whose representative has seminorm <= r.
  std::vector<XPoint> pts;
  for (std::size_t l = 0; l < x.orbit_count(); ++l) {
    for (const auto& c : q_ball(q, r)) {
      XPoint p = x.point(l, c);
      if (p.coset == c && q.seminorm(c) <= r) pts.push_back(std::move(p));
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  std::vector<AbelianElement> values;
  for (const auto& v : q_ball(b, r))
    if (!v.is_zero()) values.push_back(v);

  auto radius_of_elem = [&](const AbelianElement& e) { return q.seminorm(e); };
  auto radius_of_point = [&](const XPoint& p) { return q.seminorm(p.coset); };

  std::vector<ModuleElement> ns;
  ns.push_back(g_.module().zero());
  for (const auto& p : pts) {
    std::vector<ModuleElement> next = ns;
    for (const auto& n : ns)
      for (const auto& v : values) next.push_back(g_.module().add(n, g_.module().delta(p, v)));
    ns = std::move(next);
    if (ns.size() > cap_) throw std::length_error("enumeration batch exceeds cap");
  }

  std::vector<GroupElement> batch;
  for (const auto& qe : qs) {
    for (const auto& n : ns) {
      std::int64_t rad = radius_of_elem(qe);
      for (const auto& [p, v] : n.support()) {
        rad = std::max(rad, radius_of_point(p));
        rad = std::max(rad, b.seminorm(v));
      }
      if (rad == r) batch.push_back(GroupElement{qe, n});
    }
  }
  std::sort(batch.begin(), batch.end());
  list_.insert(list_.end(), batch.begin(), batch.end());
  if (list_.size() > cap_) throw std::length_error("enumeration exceeds cap");

  GroupIndex order = g_.order();
  if (order.is_finite() && Int(list_.size()) == order.value()) exhausted_ = true;
}

const GroupElement& Enumeration::element(std::size_t n) {
  if (n == 0) throw std::invalid_argument("enumeration is 1-based");
  while (list_.size() < n) {
    if (exhausted_) throw std::out_of_range("enumeration exhausted (finite group)");
    extend();
  }
  return list_[n - 1];
}

std::size_t Enumeration::usable_depth(std::size_t want) {
  while (list_.size() < want && !exhausted_) extend();
  return std::min(want, exhausted_ ? list_.size() : want);
}

const PairEnumeration::Pair& PairEnumeration::pair(std::size_t i) {
  if (i == 0) throw std::invalid_argument("pair enumeration is 1-based");
  while (pairs_.size() < i && !exhausted_) extend_block();
  if (pairs_.size() < i) throw std::out_of_range("pair enumeration exhausted");
  return pairs_[i - 1];
}

std::size_t PairEnumeration::usable_pairs(std::size_t want) {
  while (pairs_.size() < want && !exhausted_) extend_block();
  return std::min(want, pairs_.size());
}

void PairEnumeration::extend_block() {
  ++block_m_;
  std::size_t m = block_m_;
  if (enum_->usable_depth(m) < m) {
    exhausted_ = true;
    return;
  }
  std::vector<const GroupElement*> elems;
  for (std::size_t j = 1; j <= m; ++j) elems.push_back(&enum_->element(j));

  std::vector<int> digits(m, 0);
  while (true) {
    // Advance the ternary counter (digit 0 fastest).
    std::size_t i = 0;
    while (i < m && ++digits[i] == 3) digits[i++] = 0;
    if (i == m) break;
    if (digits[m - 1] == 0) continue;  // pair already listed in an earlier block
    Pair p;
    for (std::size_t j = 0; j < m; ++j) {
      if (digits[j] == 1) p.a.push_back(*elems[j]);
      if (digits[j] == 2) p.b.push_back(*elems[j]);
    }
    pairs_.push_back(std::move(p));
  }
}

Rat d_pow(const MembershipOracle& a, const MembershipOracle& b, std::size_t depth,
          Enumeration& enumeration) {
  std::size_t usable = enumeration.usable_depth(depth);
  Rat total = 0;
  Int denom = 1;
  for (std::size_t n = 1; n <= usable; ++n) {
    denom *= 2;
    const GroupElement& g = enumeration.element(n);
    if (a(g) != b(g)) total += Rat(1, denom);
  }
  return total;
}

EmpiricalMeasure EmpiricalMeasure::from_atoms(std::vector<MeasureAtom> atoms, bool estimated,
                                              std::uint64_t samples, std::uint64_t seed) {
  std::map<std::string, MeasureAtom> acc;
  for (auto& a : atoms) {
    std::string key = a.subgroup.canonical_key();
    auto it = acc.find(key);
    if (it == acc.end())
      acc.emplace(std::move(key), std::move(a));
    else
      it->second.weight += a.weight;
  }
  EmpiricalMeasure m;
  Rat total = 0;
  for (auto& [k, a] : acc) {
    total += a.weight;
    m.atoms_.push_back(std::move(a));
  }
  if (!m.atoms_.empty() && total != 1)
    throw std::invalid_argument("measure weights must sum to 1");
  m.estimated_ = estimated;
  m.samples_ = samples;
  m.seed_ = seed;
  return m;
}

Rat EmpiricalMeasure::e_ab_mass(const std::vector<GroupElement>& a,
                                const std::vector<GroupElement>& b) const {
  Rat mass = 0;
  for (const auto& atom : atoms_) {
    bool in = true;
    for (const auto& g : a)
      if (!triplet_contains(atom.subgroup, g)) {
        in = false;
        break;
      }
    if (!in) continue;
    for (const auto& g : b)
      if (triplet_contains(atom.subgroup, g)) {
        in = false;
        break;
      }
    if (in) mass += atom.weight;
  }
  return mass;
}

bool EmpiricalMeasure::operator==(const EmpiricalMeasure& o) const {
  if (atoms_.size() != o.atoms_.size()) return false;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (!(atoms_[i].subgroup == o.atoms_[i].subgroup) || atoms_[i].weight != o.atoms_[i].weight)
      return false;
  }
  return true;
}

EmpiricalMeasure empirical_measure(const std::vector<GroupElement>& f, const GoursatTriplet& h) {
  if (f.empty()) throw std::invalid_argument("empirical measure needs a nonempty F");
  const auto& grp = h.group();
  std::vector<MeasureAtom> atoms;
  Rat w(1, Int(f.size()));
  for (const auto& elem : f)
    atoms.push_back({triplet_conjugate(h, grp.inverse(elem)), w});
  return EmpiricalMeasure::from_atoms(std::move(atoms));
}

EmpiricalMeasure empirical_measure_mc(const ProductTransversal& f, const GoursatTriplet& h,
                                      std::uint64_t samples, std::uint64_t seed) {
  const auto& grp = h.group();
  Rng rng(seed);
  std::vector<MeasureAtom> atoms;
  Rat w(1, Int(samples));
  for (std::uint64_t s = 0; s < samples; ++s)
    atoms.push_back({triplet_conjugate(h, grp.inverse(f.sample(rng))), w});
  return EmpiricalMeasure::from_atoms(std::move(atoms), true, samples, seed);
}

Rat d_prob(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, std::size_t depth,
           PairEnumeration& pairs) {
  std::size_t usable = pairs.usable_pairs(depth);
  Rat total = 0;
  Int denom = 1;
  for (std::size_t i = 1; i <= usable; ++i) {
    denom *= 2;
    const auto& p = pairs.pair(i);
    Rat diff = mu.e_ab_mass(p.a, p.b) - nu.e_ab_mass(p.a, p.b);
    if (diff < 0) diff = -diff;
    total += diff / Rat(denom);
  }
  return total;
}

Rat p_statistic_exact(const GroupElement& g, const GoursatTriplet& k, const GoursatTriplet& h,
                      const std::vector<GroupElement>& f) {
  if (f.empty()) throw std::invalid_argument("p statistic needs a nonempty F");
  Int hits = 0;
  for (const auto& elem : f)
    if (conjugate_membership(g, elem, k) != conjugate_membership(g, elem, h)) ++hits;
  return Rat(hits, Int(f.size()));
}

McEstimate p_statistic_mc(const GroupElement& g, const GoursatTriplet& k, const GoursatTriplet& h,
                          const ProductTransversal& f, std::uint64_t samples, std::uint64_t seed) {
  Rng rng(seed);
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    GroupElement elem = f.sample(rng);
    if (conjugate_membership(g, elem, k) != conjugate_membership(g, elem, h)) ++hits;
  }
  McEstimate est;
  est.hit_fraction = Rat(Int(hits), Int(samples));
  est.mean = static_cast<double>(hits) / static_cast<double>(samples);
  est.stderr_ = std::sqrt(est.mean * (1.0 - est.mean) / static_cast<double>(samples));
  est.samples = samples;
  est.seed = seed;
  return est;
}

Rat folner_defect(const WreathGroup& grp, const std::vector<GroupElement>& f,
                  const GroupElement& g) {
  std::set<GroupElement> base(f.begin(), f.end());
  Int inter = 0;
  for (const auto& elem : f)
    if (base.count(grp.multiply(g, elem))) ++inter;
  Int size = Int(base.size());
  return Rat(2 * (size - inter), size);
}

Rat folner_defect(const ProductTransversal& f, const GroupElement& g) {
  if (!f.structured())
    return folner_defect(f.group(), f.elements(), g);
  const auto& grp = f.group();
  const auto& box_t = f.t_box();
  const auto& window = box_t.window();
  const auto& e = box_t.value_box();
  std::set<AbelianElement> iset(f.i_set().begin(), f.i_set().end());

  Int slab = box_t.size();
  Int inter = 0;
  for (const auto& r : f.i_set()) {
    if (!iset.count(grp.qgroup().add(g.q, r))) continue;
    ModuleElement shifted = grp.module().act(r, g.n);
    Int overlap = 1;
    bool inside = true;
    for (const auto& [x, v] : shifted.support()) {
      if (!std::binary_search(window.begin(), window.end(), x)) {
        inside = false;
        break;
      }
      overlap *= e.translate_overlap(v);
    }
    if (!inside || overlap == 0) continue;
    // Points of the window carrying zero shift contribute |E| each.
    Int full = e.size();
    Int covered = 1;
    for (std::size_t i = 0; i < window.size() - shifted.support_size(); ++i) covered *= full;
    inter += overlap * covered;
  }
  Int total = f.size();
  return Rat(2 * (total - inter), total);
}

Rat centered_defect(const Box& i, const AbelianElement& r) {
  return Rat(1) - Rat(i.reflect_overlap(r), i.size());
}

Rat centered_defect(const std::vector<AbelianElement>& i, const AbelianElement& r,
                    const FgAbelianGroup& q) {
  std::set<AbelianElement> iset(i.begin(), i.end());
  Int count = 0;
  for (const auto& e : i)
    if (iset.count(q.sub(r, e))) ++count;
  return Rat(1) - Rat(count, Int(i.size()));
}

Rat tempered_ratio(const WreathGroup& grp, const std::vector<std::vector<GroupElement>>& prefix) {
  if (prefix.empty()) throw std::invalid_argument("tempered_ratio needs at least one set");
  const auto& last = prefix.back();
  std::set<GroupElement> acc;
  for (std::size_t j = 0; j + 1 < prefix.size(); ++j) {
    for (const auto& a : prefix[j]) {
      GroupElement ai = grp.inverse(a);
      for (const auto& b : last) acc.insert(grp.multiply(ai, b));
    }
  }
  return Rat(Int(acc.size()), Int(last.size()));
}

Rat adapted_statistic(const BoxPower& t, const std::vector<AbelianElement>& i,
                      const GroupElement& g, const std::vector<ModuleElement>& phi,
                      const WreathGroup& grp) {
  if (i.empty()) throw std::invalid_argument("adapted statistic needs a nonempty I");
  Int good = 0;
  for (const auto& b : i) {
    GroupElement comm = grp.commutator(g, grp.lift(b));
    bool ok = true;
    for (const auto& ph : phi) {
      if (!t.contains(grp.module().add(comm.n, ph))) {
        ok = false;
        break;
      }
    }
    if (ok) ++good;
  }
  return Rat(good, Int(i.size()));
}

EmpiricalMeasure restrict_measure(const EmpiricalMeasure& mu, const AbelianSubgroup& q_prime) {
  std::vector<MeasureAtom> atoms;
  for (const auto& atom : mu.atoms()) {
    const auto& h = atom.subgroup;
    AbelianSubgroup q_res = intersect_subgroups(h.qpart(), q_prime);
    std::vector<std::pair<AbelianElement, ModuleElement>> alpha;
    for (const auto& gen : q_res.generators()) alpha.emplace_back(gen, h.cocycle(gen));
    atoms.push_back(
        {GoursatTriplet::make(h.group(), std::move(q_res), h.npart(), std::move(alpha)),
         atom.weight});
  }
  return EmpiricalMeasure::from_atoms(std::move(atoms), mu.estimated(), mu.samples(), mu.seed());
}

std::vector<std::pair<AbelianSubgroup, Rat>> pushforward_to_q(const EmpiricalMeasure& mu) {
  std::vector<std::pair<AbelianSubgroup, Rat>> out;
  for (const auto& atom : mu.atoms()) {
    bool merged = false;
    for (auto& [q, w] : out) {
      if (q == atom.subgroup.qpart()) {
        w += atom.weight;
        merged = true;
        break;
      }
    }
    if (!merged) out.emplace_back(atom.subgroup.qpart(), atom.weight);
  }
  return out;
}

}  // namespace wreathlab
