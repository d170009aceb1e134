#include "wreathlab/wreath.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace wreathlab {

WreathGroup::WreathGroup(FgAbelianGroup q, FgAbelianGroup b, QSet x)
    : q_(std::move(q)), module_(x, std::move(b)) {
  if (!(module_.xset().group() == q_))
    throw std::invalid_argument("WreathGroup: X must be a Q-set over the given Q");
}

GroupElement WreathGroup::make(AbelianElement q, ModuleElement n) const {
  return GroupElement{q_.reduce(std::move(q)), std::move(n)};
}

GroupElement WreathGroup::multiply(const GroupElement& a, const GroupElement& b) const {
  return GroupElement{q_.add(a.q, b.q), module_.add(module_.act(b.q, a.n), b.n)};
}

GroupElement WreathGroup::inverse(const GroupElement& a) const {
  AbelianElement mq = q_.neg(a.q);
  return GroupElement{mq, module_.neg(module_.act(mq, a.n))};
}

GroupElement WreathGroup::conjugate(const GroupElement& g, const GroupElement& f) const {
  return multiply(multiply(inverse(f), g), f);
}

GroupElement WreathGroup::commutator(const GroupElement& g, const GroupElement& f) const {
  // [g, f] = g^{-1} g^f, so that g^f = g [g, f].
  return multiply(inverse(g), conjugate(g, f));
}

GroupElement WreathGroup::power(const GroupElement& g, std::int64_t e) const {
  GroupElement base = e < 0 ? inverse(g) : g;
  std::int64_t k = e < 0 ? -e : e;
  GroupElement acc = identity();
  while (k > 0) {
    if (k & 1) acc = multiply(acc, base);
    base = multiply(base, base);
    k >>= 1;
  }
  return acc;
}

GroupIndex WreathGroup::order() const {
  GroupIndex qo = q_.order();
  GroupIndex no = module_.order();
  return qo * no;
}

std::vector<GroupElement> WreathGroup::all_elements() const {
  GroupIndex o = order();
  if (!o.is_finite()) throw std::invalid_argument("all_elements: infinite group");
  std::vector<AbelianElement> qs = subgroup_elements(AbelianSubgroup::full(q_));
  std::vector<XPoint> pts = module_.xset().all_points();
  std::vector<AbelianElement> values = subgroup_elements(AbelianSubgroup::full(base()));

  std::vector<ModuleElement> ns;
  ns.push_back(module_.zero());
  for (const auto& x : pts) {
    std::vector<ModuleElement> next;
    next.reserve(ns.size() * values.size());
    for (const auto& n : ns)
      for (const auto& v : values) next.push_back(module_.add(n, module_.delta(x, v)));
    ns = std::move(next);
  }
  std::vector<GroupElement> out;
  out.reserve(qs.size() * ns.size());
  for (const auto& q : qs)
    for (const auto& n : ns) out.push_back(GroupElement{q, n});
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

GroupElement accumulate_word(const WreathGroup& g,
                             const std::vector<std::pair<AbelianElement, ModuleElement>>& lifts,
                             const std::vector<Int>& coeffs) {
  GroupElement acc = g.identity();
  for (std::size_t j = 0; j < lifts.size(); ++j) {
    std::int64_t c = static_cast<std::int64_t>(coeffs[j]);
    if (c == 0) continue;
    acc = g.multiply(acc, g.power(GroupElement{lifts[j].first, lifts[j].second}, c));
  }
  return acc;
}

}  // namespace

std::vector<std::string> triplet_violations(
    const WreathGroup& g, const AbelianSubgroup& q_h, const Submodule& n_h,
    const std::vector<std::pair<AbelianElement, ModuleElement>>& alpha) {
  std::vector<std::string> bad;
  std::vector<AbelianElement> gens;
  for (const auto& [gen, a] : alpha) {
    (void)a;
    gens.push_back(gen);
    if (!q_h.contains(gen)) bad.push_back("alpha generator outside Q_H");
  }
  if (!(AbelianSubgroup::from_generators(g.qgroup(), gens) == q_h))
    bad.push_back("alpha generators do not generate Q_H");
  if (!bad.empty()) return bad;

  for (std::size_t j = 0; j < alpha.size(); ++j) {
    if (!n_h.invariant_under(alpha[j].first)) {
      std::ostringstream os;
      os << "N_H not invariant under generator " << j;
      bad.push_back(os.str());
    }
  }
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    for (std::size_t k = j + 1; k < alpha.size(); ++k) {
      GroupElement c = g.commutator(GroupElement{alpha[j].first, alpha[j].second},
                                    GroupElement{alpha[k].first, alpha[k].second});
      if (!c.q.is_zero()) {
        bad.push_back("generator commutator has nonzero Q-part");
        continue;
      }
      if (!n_h.contains(c.n)) {
        std::ostringstream os;
        os << "commutation cocycle of generators " << j << "," << k << " escapes N_H";
        bad.push_back(os.str());
      }
    }
  }
  lat::Mat rels = relation_basis(g.qgroup(), gens);
  for (std::size_t r = 0; r < rels.size(); ++r) {
    GroupElement w = accumulate_word(g, alpha, rels[r]);
    if (!w.q.is_zero()) {
      bad.push_back("relation word has nonzero Q-part");
      continue;
    }
    if (!n_h.contains(w.n)) {
      std::ostringstream os;
      os << "relation word " << r << " (";
      for (const auto& c : rels[r]) os << c << " ";
      os << ") escapes N_H";
      bad.push_back(os.str());
    }
  }
  return bad;
}

GoursatTriplet GoursatTriplet::make(const WreathGroup& g, AbelianSubgroup q_h, Submodule n_h,
                                    std::vector<std::pair<AbelianElement, ModuleElement>> alpha) {
  auto bad = triplet_violations(g, q_h, n_h, alpha);
  if (!bad.empty()) {
    std::string msg = "invalid Goursat triplet:";
    for (const auto& b : bad) msg += " [" + b + "]";
    throw std::invalid_argument(msg);
  }

  GoursatTriplet t;
  t.group_ = g;
  t.q_h_ = std::move(q_h);
  t.n_h_ = std::move(n_h);

  std::vector<AbelianElement> user_gens;
  for (const auto& [gen, a] : alpha) {
    (void)a;
    user_gens.push_back(gen);
  }
  for (const auto& h : t.q_h_.generators()) {
    auto coeffs = solve_in_generators(t.q_h_, user_gens, h);
    GroupElement lift = accumulate_word(g, alpha, coeffs);
    t.alpha_.emplace_back(h, t.n_h_.reduce(lift.n));
  }
  return t;
}

ModuleElement GoursatTriplet::cocycle(const AbelianElement& q) const {
  std::vector<AbelianElement> gens;
  for (const auto& [gen, a] : alpha_) {
    (void)a;
    gens.push_back(gen);
  }
  auto coeffs = solve_in_generators(q_h_, gens, q);
  return accumulate_word(group_, alpha_, coeffs).n;
}

GroupElement GoursatTriplet::lift(const AbelianElement& q) const {
  return GroupElement{group_.qgroup().reduce(q), cocycle(q)};
}

std::string GoursatTriplet::canonical_key() const {
  std::ostringstream os;
  os << "Q[";
  for (const auto& col : q_h_.lattice()) {
    for (const auto& x : col) os << x << ",";
    os << ";";
  }
  os << "]N[" << n_h_.canonical_key() << "]A[";
  for (const auto& [gen, a] : alpha_) {
    os << "(";
    for (auto c : gen.coords) os << c << ",";
    os << "->";
    for (const auto& [x, v] : a.support()) {
      os << x.orbit << ":";
      for (auto c : x.coset.coords) os << c << ",";
      os << "=";
      for (auto c : v.coords) os << c << ",";
      os << "|";
    }
    os << ")";
  }
  os << "]";
  return os.str();
}

bool triplet_contains(const GoursatTriplet& h, const GroupElement& g) {
  if (!h.qpart().contains(g.q)) return false;
  const auto& grp = h.group();
  GroupElement rest = grp.multiply(grp.inverse(h.lift(g.q)), g);
  return h.npart().contains(rest.n);
}

GoursatTriplet triplet_conjugate(const GoursatTriplet& h, const GroupElement& g) {
  const auto& grp = h.group();
  Submodule n_conj = h.npart().conjugated(g.q);
  std::vector<std::pair<AbelianElement, ModuleElement>> alpha;
  for (const auto& [gen, a] : h.alpha()) {
    GroupElement conj = grp.conjugate(GroupElement{gen, a}, g);
    alpha.emplace_back(conj.q, conj.n);
  }
  return GoursatTriplet::make(grp, h.qpart(), std::move(n_conj), std::move(alpha));
}

GroupIndex triplet_index(const GoursatTriplet& h) {
  return h.qpart().index() * h.npart().index();
}

bool conjugate_membership(const GroupElement& g, const GroupElement& f, const GoursatTriplet& h) {
  if (!h.qpart().contains(g.q)) return false;
  const auto& grp = h.group();
  GroupElement comm = grp.commutator(g, f);
  GroupElement rest = grp.multiply(grp.inverse(h.lift(g.q)), g);  // (0, n - a_q)
  return h.npart().contains(grp.module().add(comm.n, rest.n));
}

Submodule normalizer_in_module(const GoursatTriplet& h) {
  std::vector<AbelianElement> gens;
  for (const auto& [gen, a] : h.alpha()) {
    (void)a;
    gens.push_back(gen);
  }
  return h.npart().normalizer_in_module(gens);
}

GroupIndex normalizer_index_in_module(const GoursatTriplet& h) {
  return normalizer_in_module(h).index();
}

BoxPower::BoxPower(PermModule mod, Box e, std::vector<XPoint> z)
    : mod_(std::move(mod)), e_(std::move(e)), z_(std::move(z)) {
  if (!(e_.group() == mod_.base())) throw std::invalid_argument("BoxPower: box over wrong base");
  for (auto& p : z_) p = mod_.xset().point(p.orbit, p.coset);
  std::sort(z_.begin(), z_.end());
  z_.erase(std::unique(z_.begin(), z_.end()), z_.end());
}

Int BoxPower::size() const {
  Int s = 1;
  Int es = e_.size();
  for (std::size_t i = 0; i < z_.size(); ++i) s *= es;
  return s;
}

bool BoxPower::contains(const ModuleElement& n) const {
  for (const auto& [x, v] : n.support()) {
    if (!std::binary_search(z_.begin(), z_.end(), x)) return false;
    if (!e_.contains(v)) return false;
  }
  return true;
}

ModuleElement BoxPower::sample(Rng& rng) const {
  std::vector<std::pair<XPoint, AbelianElement>> pairs;
  for (const auto& z : z_) pairs.emplace_back(z, e_.sample(rng));
  return mod_.from_pairs(pairs);
}

std::vector<ModuleElement> BoxPower::elements(std::uint64_t limit) const {
  if (size() > limit) throw std::invalid_argument("BoxPower too large to materialize");
  std::vector<AbelianElement> values = e_.elements();
  std::vector<ModuleElement> out;
  out.push_back(mod_.zero());
  for (const auto& z : z_) {
    std::vector<ModuleElement> next;
    next.reserve(out.size() * values.size());
    for (const auto& n : out)
      for (const auto& v : values) next.push_back(mod_.add(n, mod_.delta(z, v)));
    out = std::move(next);
  }
  return out;
}

bool BoxPower::is_subgroup() const {
  // The box covers B exactly when B is torsion-only (boxes always contain
  // the whole torsion part) or k is large enough; free directions are never
  // covered.
  return mod_.base().free_rank() == 0;
}

ProductTransversal::ProductTransversal(WreathGroup g, std::vector<AbelianElement> i_set, BoxPower t)
    : group_(std::move(g)), i_(std::move(i_set)), t_(std::move(t)) {
  if (i_.empty()) throw std::invalid_argument("transversal needs a nonempty I");
}

ProductTransversal::ProductTransversal(WreathGroup g, std::vector<AbelianElement> i_set,
                                       std::vector<ModuleElement> t_elements)
    : group_(std::move(g)), i_(std::move(i_set)), explicit_t_(std::move(t_elements)) {
  if (i_.empty() || explicit_t_.empty())
    throw std::invalid_argument("transversal needs nonempty factors");
}

Int ProductTransversal::size() const {
  Int t = structured() ? t_.size() : Int(explicit_t_.size());
  return Int(i_.size()) * t;
}

bool ProductTransversal::contains(const GroupElement& g) const {
  bool qin = std::find(i_.begin(), i_.end(), g.q) != i_.end();
  if (!qin) return false;
  if (structured()) return t_.contains(g.n);
  return std::find(explicit_t_.begin(), explicit_t_.end(), g.n) != explicit_t_.end();
}

std::vector<GroupElement> ProductTransversal::elements(std::uint64_t limit) const {
  if (size() > limit) throw std::invalid_argument("transversal too large to materialize");
  std::vector<ModuleElement> ts = structured() ? t_.elements(limit) : explicit_t_;
  std::vector<GroupElement> out;
  out.reserve(i_.size() * ts.size());
  for (const auto& r : i_)
    for (const auto& m : ts) out.push_back(group_.make(r, m));
  return out;
}

GroupElement ProductTransversal::sample(Rng& rng) const {
  const AbelianElement& r = i_[rng.below(i_.size())];
  if (structured()) return group_.make(r, t_.sample(rng));
  return group_.make(r, explicit_t_[rng.below(explicit_t_.size())]);
}

}  // namespace wreathlab
