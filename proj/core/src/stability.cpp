#include "wreathlab/stability.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

#include "wreathlab/rng.hpp"

namespace wreathlab {

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::uint32_t> im(n);
  for (std::size_t i = 0; i < n; ++i) im[i] = static_cast<std::uint32_t>(i);
  return Permutation(std::move(im));
}

Permutation::Permutation(std::vector<std::uint32_t> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (auto x : images_) {
    if (x >= images_.size() || seen[x]) throw std::invalid_argument("not a permutation");
    seen[x] = true;
  }
}

Permutation Permutation::compose(const Permutation& other) const {
  if (degree() != other.degree()) throw std::invalid_argument("degree mismatch");
  std::vector<std::uint32_t> im(degree());
  for (std::size_t x = 0; x < degree(); ++x) im[x] = images_[other.images_[x]];
  return Permutation(std::move(im));
}

Permutation Permutation::inverse() const {
  std::vector<std::uint32_t> im(degree());
  for (std::size_t x = 0; x < degree(); ++x) im[images_[x]] = static_cast<std::uint32_t>(x);
  return Permutation(std::move(im));
}

std::size_t Permutation::fixed_points() const {
  std::size_t f = 0;
  for (std::size_t x = 0; x < degree(); ++x)
    if (images_[x] == x) ++f;
  return f;
}

bool Permutation::is_identity() const { return fixed_points() == degree(); }

Rat hamming(const Permutation& a, const Permutation& b) {
  if (a.degree() != b.degree()) throw std::invalid_argument("hamming: degree mismatch");
  std::size_t moved = 0;
  for (std::size_t x = 0; x < a.degree(); ++x)
    if (a(static_cast<std::uint32_t>(x)) != b(static_cast<std::uint32_t>(x))) ++moved;
  return Rat(Int(moved), Int(a.degree()));
}

const Permutation& GeneratorAssignment::at(const std::string& name) const {
  auto it = perms.find(name);
  if (it == perms.end()) throw std::invalid_argument("unknown generator: " + name);
  return it->second;
}

GeneratorAssignment coset_action(const GoursatTriplet& k,
                                 const std::vector<std::pair<std::string, GroupElement>>& gens,
                                 std::uint64_t index_bound) {
  GroupIndex idx = triplet_index(k);
  if (!idx.is_finite())
    throw std::invalid_argument("coset_action: subgroup has infinite index");
  if (idx.value() > Int(index_bound)) {
    std::ostringstream os;
    os << "coset_action: index " << idx.value() << " exceeds bound " << index_bound;
    throw std::invalid_argument(os.str());
  }
  const auto& g = k.group();

  // Canonical coset representative of xK.
  auto canonical = [&](const GroupElement& x) {
    AbelianElement qbar = k.qpart().residue(x.q);
    AbelianElement r = g.qgroup().sub(qbar, x.q);
    GroupElement moved = g.multiply(x, k.lift(r));
    return GroupElement{std::move(qbar), k.npart().reduce(moved.n)};
  };

  std::vector<GroupElement> reps;
  std::map<GroupElement, std::uint32_t> id_of;
  std::deque<std::uint32_t> queue;
  GroupElement start = canonical(g.identity());
  id_of.emplace(start, 0);
  reps.push_back(start);
  queue.push_back(0);

  // Generators and their inverses, in list order.
  std::vector<GroupElement> steps;
  for (const auto& [name, elem] : gens) {
    (void)name;
    steps.push_back(elem);
    steps.push_back(g.inverse(elem));
  }

  while (!queue.empty()) {
    std::uint32_t cur = queue.front();
    queue.pop_front();
    for (const auto& s : steps) {
      GroupElement next = canonical(g.multiply(s, reps[cur]));
      if (id_of.emplace(next, static_cast<std::uint32_t>(reps.size())).second) {
        reps.push_back(next);
        queue.push_back(static_cast<std::uint32_t>(reps.size() - 1));
      }
    }
  }
  if (Int(reps.size()) != idx.value())
    throw std::logic_error("coset_action: BFS count disagrees with the index");

  GeneratorAssignment out;
  out.degree = reps.size();
  for (const auto& [name, elem] : gens) {
    std::vector<std::uint32_t> im(reps.size());
    for (std::size_t c = 0; c < reps.size(); ++c) {
      GroupElement next = canonical(g.multiply(elem, reps[c]));
      im[c] = id_of.at(next);
    }
    out.names.push_back(name);
    out.perms.emplace(name, Permutation(std::move(im)));
  }
  return out;
}

Word word_inverse(const Word& w) {
  Word out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.emplace_back(it->first, -it->second);
  return out;
}

Word word_conjugate(const Word& x, const Word& y) {
  Word out = word_inverse(y);
  out.insert(out.end(), x.begin(), x.end());
  out.insert(out.end(), y.begin(), y.end());
  return out;
}

Word word_commutator(const Word& x, const Word& y) {
  Word out = word_conjugate(x, y);
  Word xi = word_inverse(x);
  out.insert(out.end(), xi.begin(), xi.end());
  return out;
}

std::int64_t word_occurrences(const Word& w, const std::string& name) {
  std::int64_t count = 0;
  for (const auto& [n, e] : w)
    if (n == name) count += std::abs(e);
  return count;
}

Permutation evaluate_word(const GeneratorAssignment& assignment, const Word& w) {
  Permutation acc = Permutation::identity(assignment.degree);
  for (const auto& [name, exp] : w) {
    const Permutation& p = assignment.at(name);
    Permutation base = exp < 0 ? p.inverse() : p;
    for (std::int64_t i = 0; i < std::abs(exp); ++i) acc = acc.compose(base);
  }
  return acc;
}

DefectReport relation_defect(const GeneratorAssignment& assignment,
                             const std::vector<std::pair<std::string, Word>>& words) {
  DefectReport rep;
  rep.max_defect = 0;
  Permutation id = Permutation::identity(assignment.degree);
  for (const auto& [label, w] : words) {
    Rat d = hamming(evaluate_word(assignment, w), id);
    rep.max_defect = std::max(rep.max_defect, d);
    rep.rows.push_back({label, std::move(d)});
  }
  return rep;
}

LamplighterQuotient lamplighter_quotient(unsigned k) {
  if (k < 2) throw std::invalid_argument("lamplighter quotient needs k >= 2");
  FgAbelianGroup q(0, {static_cast<std::int64_t>(k)});
  FgAbelianGroup b(0, {2});
  QSet x(q, {AbelianSubgroup::trivial(q)});
  WreathGroup g(q, b, x);

  LamplighterQuotient out{g, {}, {}, {}};
  out.b = g.embed(g.module().delta(x.basepoint(0), b.element({1})));
  out.t = g.lift(q.element({1}));
  Submodule zero = Submodule::finite_x(WindowLattice::zero(g.module(), x.all_points()));
  out.trivial_subgroup =
      GoursatTriplet::make(g, AbelianSubgroup::trivial(q), std::move(zero), {});
  return out;
}

StabilityDemoReport demo_cor_1_6(unsigned k, unsigned j_max, unsigned perturbations,
                                 std::uint64_t seed) {
  LamplighterQuotient lq = lamplighter_quotient(k);
  GeneratorAssignment exact =
      coset_action(lq.trivial_subgroup, {{"b", lq.b}, {"t", lq.t}});

  std::vector<std::pair<std::string, Word>> words;
  Word wb{{"b", 1}};
  for (unsigned j = 1; j <= j_max; ++j) {
    Word tj{{"t", static_cast<std::int64_t>(j)}};
    std::ostringstream label;
    label << "[b,b^t^" << j << "]";
    words.emplace_back(label.str(), word_commutator(wb, word_conjugate(wb, tj)));
  }

  StabilityDemoReport rep;
  rep.degree = exact.degree;
  rep.k = k;
  rep.j_max = j_max;
  rep.perturbations = perturbations;
  rep.seed = seed;

  DefectReport exact_defects = relation_defect(exact, words);
  rep.exact_defects = exact_defects.rows;
  rep.witness_exact = exact_defects.max_defect == 0;

  // Perturb tau by the requested number of random transpositions.
  Rng rng(derive_seed(seed, "stability-demo"));
  Permutation tau = exact.at("t");
  for (unsigned p = 0; p < perturbations; ++p) {
    std::uint32_t u = static_cast<std::uint32_t>(rng.below(rep.degree));
    std::uint32_t v = static_cast<std::uint32_t>(rng.below(rep.degree));
    while (v == u) v = static_cast<std::uint32_t>(rng.below(rep.degree));
    std::vector<std::uint32_t> t(rep.degree);
    for (std::size_t i = 0; i < rep.degree; ++i) t[i] = static_cast<std::uint32_t>(i);
    std::swap(t[u], t[v]);
    tau = Permutation(std::move(t)).compose(tau);
  }

  GeneratorAssignment perturbed;
  perturbed.degree = exact.degree;
  perturbed.names = exact.names;
  perturbed.perms.emplace("b", exact.at("b"));
  perturbed.perms.emplace("t", tau);

  rep.distance_b = hamming(exact.at("b"), perturbed.at("b"));
  rep.distance_t = hamming(exact.at("t"), perturbed.at("t"));
  rep.witness_b = exact.at("b");
  rep.witness_t = exact.at("t");
  rep.perturbed_t = tau;

  DefectReport pd = relation_defect(perturbed, words);
  rep.perturbed_defects = pd.rows;

  rep.bounds_hold = true;
  for (const auto& [label, w] : words) {
    std::int64_t c_w = word_occurrences(w, "t");
    rep.lipschitz_bounds.push_back(
        {label, Rat(Int(4 * c_w * perturbations), Int(rep.degree))});
  }
  for (std::size_t i = 0; i < words.size(); ++i)
    rep.bounds_hold = rep.bounds_hold && rep.perturbed_defects[i].defect <= rep.lipschitz_bounds[i].defect;
  return rep;
}

}  // namespace wreathlab
