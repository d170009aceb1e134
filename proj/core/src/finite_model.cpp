#include "wreathlab/finite_model.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace wreathlab {

FiniteWreathModel::FiniteWreathModel(std::vector<std::int64_t> q_moduli,
                                     std::vector<std::int64_t> b_moduli)
    : q_moduli_(std::move(q_moduli)), b_moduli_(std::move(b_moduli)) {
  for (auto m : q_moduli_) {
    if (m < 1) throw std::invalid_argument("bad Q modulus");
    q_order_ *= static_cast<std::size_t>(m);
  }
  for (auto m : b_moduli_) {
    if (m < 1) throw std::invalid_argument("bad B modulus");
    b_order_ *= static_cast<std::size_t>(m);
  }
}

std::size_t FiniteWreathModel::order() const {
  std::size_t o = q_order_;
  for (std::size_t i = 0; i < q_order_; ++i) o *= b_order_;
  return o;
}

std::size_t FiniteWreathModel::point_of(const std::vector<std::int64_t>& q_coords) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < q_moduli_.size(); ++i)
    idx = idx * static_cast<std::size_t>(q_moduli_[i]) + static_cast<std::size_t>(q_coords[i]);
  return idx;
}

FiniteWreathModel::Elem FiniteWreathModel::identity() const {
  return Elem(q_moduli_.size() + q_order_ * b_moduli_.size(), 0);
}

FiniteWreathModel::Elem FiniteWreathModel::multiply(const Elem& a, const Elem& b) const {
  std::size_t qr = q_moduli_.size();
  std::size_t br = b_moduli_.size();
  Elem out(a.size(), 0);
  for (std::size_t i = 0; i < qr; ++i) out[i] = (a[i] + b[i]) % q_moduli_[i];

  // (f^[q])(x) = f(q + x); out values = a-values shifted by b's q, plus b's.
  std::vector<std::int64_t> xq(qr), shifted(qr);
  std::vector<std::int64_t> counter(qr, 0);
  for (std::size_t p = 0; p < q_order_; ++p) {
    for (std::size_t i = 0; i < qr; ++i) {
      xq[i] = counter[i];
      shifted[i] = (b[i] + counter[i]) % q_moduli_[i];
    }
    std::size_t dst = point_of(xq);
    std::size_t src = point_of(shifted);
    for (std::size_t j = 0; j < br; ++j)
      out[qr + dst * br + j] = (a[qr + src * br + j] + b[qr + dst * br + j]) % b_moduli_[j];
    for (std::size_t i = qr; i-- > 0;) {
      if (++counter[i] < q_moduli_[i]) break;
      counter[i] = 0;
    }
  }
  return out;
}

FiniteWreathModel::Elem FiniteWreathModel::inverse(const Elem& a) const {
  std::size_t qr = q_moduli_.size();
  std::size_t br = b_moduli_.size();
  Elem out(a.size(), 0);
  for (std::size_t i = 0; i < qr; ++i) out[i] = (q_moduli_[i] - a[i]) % q_moduli_[i];

  std::vector<std::int64_t> xq(qr), shifted(qr);
  std::vector<std::int64_t> counter(qr, 0);
  for (std::size_t p = 0; p < q_order_; ++p) {
    for (std::size_t i = 0; i < qr; ++i) {
      xq[i] = counter[i];
      shifted[i] = (out[i] + counter[i] + q_moduli_[i]) % q_moduli_[i];
    }
    std::size_t dst = point_of(xq);
    std::size_t src = point_of(shifted);
    for (std::size_t j = 0; j < br; ++j)
      out[qr + dst * br + j] = (b_moduli_[j] - a[qr + src * br + j]) % b_moduli_[j];
    for (std::size_t i = qr; i-- > 0;) {
      if (++counter[i] < q_moduli_[i]) break;
      counter[i] = 0;
    }
  }
  return out;
}

FiniteWreathModel::Elem FiniteWreathModel::conjugate(const Elem& g, const Elem& f) const {
  return multiply(multiply(inverse(f), g), f);
}

std::vector<FiniteWreathModel::Elem> FiniteWreathModel::all_elements() const {
  std::size_t len = q_moduli_.size() + q_order_ * b_moduli_.size();
  std::vector<std::int64_t> moduli;
  moduli.insert(moduli.end(), q_moduli_.begin(), q_moduli_.end());
  for (std::size_t p = 0; p < q_order_; ++p)
    moduli.insert(moduli.end(), b_moduli_.begin(), b_moduli_.end());

  std::vector<Elem> out;
  Elem cur(len, 0);
  while (true) {
    out.push_back(cur);
    std::size_t i = len;
    bool done = true;
    while (i > 0) {
      --i;
      if (++cur[i] < moduli[i]) {
        done = false;
        break;
      }
      cur[i] = 0;
    }
    if (done) break;
  }
  return out;
}

std::vector<std::vector<FiniteWreathModel::Elem>> FiniteWreathModel::all_subgroups() const {
  std::vector<Elem> everyone = all_elements();

  auto closure = [&](std::vector<Elem> gens) {
    std::set<Elem> members;
    members.insert(identity());
    std::vector<Elem> frontier(members.begin(), members.end());
    for (const auto& g : gens) {
      if (members.insert(g).second) frontier.push_back(g);
    }
    while (!frontier.empty()) {
      std::vector<Elem> next;
      for (const auto& a : frontier) {
        for (const auto& b : std::vector<Elem>(members.begin(), members.end())) {
          Elem ab = multiply(a, b);
          if (members.insert(ab).second) next.push_back(ab);
          Elem ai = inverse(a);
          if (members.insert(ai).second) next.push_back(ai);
        }
      }
      frontier = std::move(next);
    }
    return std::vector<Elem>(members.begin(), members.end());
  };

  std::set<std::vector<Elem>> found;
  std::vector<std::vector<Elem>> worklist;
  auto trivial = closure({});
  found.insert(trivial);
  worklist.push_back(trivial);
  while (!worklist.empty()) {
    auto sub = std::move(worklist.back());
    worklist.pop_back();
    std::set<Elem> as_set(sub.begin(), sub.end());
    for (const auto& g : everyone) {
      if (as_set.count(g)) continue;
      auto gens = sub;
      gens.push_back(g);
      auto bigger = closure(gens);
      if (found.insert(bigger).second) worklist.push_back(bigger);
    }
  }
  return std::vector<std::vector<Elem>>(found.begin(), found.end());
}

WreathGroup regular_finite_wreath(const std::vector<std::int64_t>& q_moduli,
                                  const std::vector<std::int64_t>& b_moduli) {
  FgAbelianGroup q(0, q_moduli);
  FgAbelianGroup b(0, b_moduli);
  QSet x(q, {AbelianSubgroup::trivial(q)});
  return WreathGroup(q, b, x);
}

namespace {

// Subgroups of a finite abelian group by generator closure.
std::vector<AbelianSubgroup> abelian_subgroups(const FgAbelianGroup& q) {
  std::vector<AbelianElement> elems = subgroup_elements(AbelianSubgroup::full(q));
  std::set<lat::Mat> seen;
  std::vector<AbelianSubgroup> out;
  std::vector<AbelianSubgroup> worklist;
  AbelianSubgroup triv = AbelianSubgroup::trivial(q);
  seen.insert(triv.lattice());
  out.push_back(triv);
  worklist.push_back(triv);
  while (!worklist.empty()) {
    AbelianSubgroup sub = std::move(worklist.back());
    worklist.pop_back();
    for (const auto& g : elems) {
      if (sub.contains(g)) continue;
      auto gens = sub.generators();
      gens.push_back(g);
      AbelianSubgroup bigger = AbelianSubgroup::from_generators(q, gens);
      if (seen.insert(bigger.lattice()).second) {
        out.push_back(bigger);
        worklist.push_back(bigger);
      }
    }
  }
  return out;
}

// Subgroups of the finite module N = B^X via closure, as window lattices.
std::vector<Submodule> module_submodules(const PermModule& mod) {
  std::vector<XPoint> pts = mod.xset().all_points();
  std::vector<AbelianElement> values = subgroup_elements(AbelianSubgroup::full(mod.base()));
  std::vector<ModuleElement> elems;
  elems.push_back(mod.zero());
  for (const auto& p : pts) {
    std::vector<ModuleElement> next;
    for (const auto& n : elems)
      for (const auto& v : values) next.push_back(mod.add(n, mod.delta(p, v)));
    elems = std::move(next);
  }

  auto closure_lattice = [&](const std::vector<ModuleElement>& gens) {
    return WindowLattice::from_elements(mod, pts, gens);
  };

  std::set<lat::Mat> seen;
  std::vector<Submodule> out;
  std::vector<WindowLattice> worklist;
  WindowLattice triv = WindowLattice::zero(mod, pts);
  seen.insert(triv.lattice());
  out.push_back(Submodule::finite_x(triv));
  worklist.push_back(triv);
  while (!worklist.empty()) {
    WindowLattice sub = std::move(worklist.back());
    worklist.pop_back();
    for (const auto& n : elems) {
      if (sub.contains(n)) continue;
      auto gens = sub.generators();
      gens.push_back(n);
      WindowLattice bigger = closure_lattice(gens);
      if (seen.insert(bigger.lattice()).second) {
        out.push_back(Submodule::finite_x(bigger));
        worklist.push_back(bigger);
      }
    }
  }
  return out;
}

}  // namespace

std::vector<GoursatTriplet> enumerate_triplets(const WreathGroup& g) {
  std::vector<GoursatTriplet> out;
  std::set<std::string> seen;
  std::vector<AbelianSubgroup> q_subs = abelian_subgroups(g.qgroup());
  std::vector<Submodule> n_subs = module_submodules(g.module());

  for (const auto& qh : q_subs) {
    std::vector<AbelianElement> gens = qh.generators();
    for (const auto& nh : n_subs) {
      std::vector<ModuleElement> reps = nh.finite_lattice().quotient_representatives();
      // Try every tuple of candidate cocycle values on the generators.
      std::vector<std::size_t> digits(gens.size(), 0);
      while (true) {
        std::vector<std::pair<AbelianElement, ModuleElement>> alpha;
        for (std::size_t j = 0; j < gens.size(); ++j) alpha.emplace_back(gens[j], reps[digits[j]]);
        if (triplet_violations(g, qh, nh, alpha).empty()) {
          GoursatTriplet t = GoursatTriplet::make(g, qh, nh, alpha);
          if (seen.insert(t.canonical_key()).second) out.push_back(std::move(t));
        }
        std::size_t i = gens.size();
        bool done = true;
        while (i > 0) {
          --i;
          if (++digits[i] < reps.size()) {
            done = false;
            break;
          }
          digits[i] = 0;
        }
        if (done || gens.empty()) break;
      }
    }
  }
  return out;
}

namespace {

GroupElement bridge_element(const WreathGroup& g, const FiniteWreathModel& model,
                            const FiniteWreathModel::Elem& e) {
  // Moduli equal to 1 contribute nothing and are dropped on the library side.
  std::size_t qr = model.q_moduli().size();
  std::size_t br = model.b_moduli().size();
  auto select = [](const std::vector<std::int64_t>& moduli, const std::int64_t* coords) {
    std::vector<std::int64_t> kept;
    for (std::size_t i = 0; i < moduli.size(); ++i)
      if (moduli[i] >= 2) kept.push_back(coords[i]);
    return kept;
  };
  AbelianElement q = g.qgroup().element(select(model.q_moduli(), e.data()));

  std::vector<std::pair<XPoint, AbelianElement>> pairs;
  std::vector<std::int64_t> counter(qr, 0);
  for (std::size_t p = 0; p < model.q_order(); ++p) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < qr; ++i)
      idx = idx * static_cast<std::size_t>(model.q_moduli()[i]) +
            static_cast<std::size_t>(counter[i]);
    AbelianElement coset = g.qgroup().element(select(model.q_moduli(), counter.data()));
    std::vector<std::int64_t> val =
        select(model.b_moduli(), e.data() + qr + idx * br);
    pairs.emplace_back(XPoint{0, coset}, g.base().element(std::move(val)));
    for (std::size_t i = qr; i-- > 0;) {
      if (++counter[i] < model.q_moduli()[i]) break;
      counter[i] = 0;
    }
  }
  return g.make(std::move(q), g.module().from_pairs(pairs));
}

}  // namespace

AuditReport goursat_audit(const std::vector<std::int64_t>& q_moduli,
                          const std::vector<std::int64_t>& b_moduli, std::size_t order_bound,
                          bool inject_fault) {
  AuditReport rep;
  FiniteWreathModel model(q_moduli, b_moduli);
  std::size_t true_order = model.q_order();
  for (std::size_t p = 0; p < model.q_order(); ++p) true_order *= model.b_order();
  if (true_order > order_bound) {
    std::ostringstream os;
    os << "quotient order " << true_order << " exceeds bound " << order_bound;
    throw std::invalid_argument(os.str());
  }

  // Library side: torsion moduli must be in invariant-factor form (>= 2).
  std::vector<std::int64_t> q_lib, b_lib;
  for (auto m : q_moduli)
    if (m >= 2) q_lib.push_back(m);
  for (auto m : b_moduli)
    if (m >= 2) b_lib.push_back(m);
  WreathGroup g = regular_finite_wreath(q_lib, b_lib);

  std::vector<FiniteWreathModel::Elem> model_elems = model.all_elements();
  std::vector<GroupElement> bridged;
  bridged.reserve(model_elems.size());
  for (const auto& e : model_elems) bridged.push_back(bridge_element(g, model, e));

  auto brute = model.all_subgroups();
  auto triplets = enumerate_triplets(g);
  rep.brute_subgroups = brute.size();
  rep.triplet_subgroups = triplets.size();

  if (brute.size() != triplets.size()) {
    std::ostringstream os;
    os << "subgroup counts differ: brute " << brute.size() << " vs triplets " << triplets.size();
    rep.mismatches.push_back(os.str());
  }

  // Match each brute subgroup to the unique triplet with the same members.
  std::vector<int> matched(triplets.size(), -1);
  for (std::size_t bi = 0; bi < brute.size(); ++bi) {
    std::set<FiniteWreathModel::Elem> members(brute[bi].begin(), brute[bi].end());
    int found = -1;
    for (std::size_t ti = 0; ti < triplets.size(); ++ti) {
      bool same = true;
      for (std::size_t ei = 0; ei < model_elems.size() && same; ++ei) {
        bool in_brute = members.count(model_elems[ei]) > 0;
        bool in_triplet = triplet_contains(triplets[ti], bridged[ei]);
        if (inject_fault && bi == 0 && ei == 0) in_triplet = !in_triplet;
        same = in_brute == in_triplet;
      }
      if (same) {
        if (found >= 0) {
          rep.mismatches.push_back("two triplets share one membership set");
        }
        found = static_cast<int>(ti);
      }
    }
    if (found < 0) {
      std::ostringstream os;
      os << "brute subgroup " << bi << " (order " << brute[bi].size() << ") has no triplet";
      rep.mismatches.push_back(os.str());
      continue;
    }
    if (matched[found] >= 0) rep.mismatches.push_back("triplet matched twice");
    matched[found] = static_cast<int>(bi);

    // Index agreement.
    GroupIndex ti_index = triplet_index(triplets[found]);
    if (!ti_index.is_finite() ||
        ti_index.value() != Int(model_elems.size() / brute[bi].size())) {
      std::ostringstream os;
      os << "index mismatch on brute subgroup " << bi;
      rep.mismatches.push_back(os.str());
    }

    // Conjugation agreement on a few elements.
    for (std::size_t ei = 0; ei < model_elems.size(); ei += std::max<std::size_t>(1, model_elems.size() / 5)) {
      const auto& f = model_elems[ei];
      GoursatTriplet conj = triplet_conjugate(triplets[found], bridged[ei]);
      for (std::size_t gi = 0; gi < model_elems.size(); gi += 3) {
        bool in_brute = members.count(model.conjugate(model_elems[gi], model.inverse(f))) > 0;
        // H^{f^{-1}} corresponds to conjugating members by f^{-1}.
        bool in_conj = triplet_contains(conj, bridged[gi]);
        if (in_brute != in_conj) {
          rep.mismatches.push_back("conjugation mismatch");
          break;
        }
      }
    }
  }
  rep.ok = rep.mismatches.empty();
  return rep;
}

}  // namespace wreathlab
