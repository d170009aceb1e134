#include "wreathlab/weiss.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "wreathlab/rng.hpp"

namespace wreathlab {

namespace {

std::vector<AbelianElement> full_group_generators(const FgAbelianGroup& q) {
  std::vector<AbelianElement> gens;
  for (std::size_t i = 0; i < q.rank(); ++i) {
    std::vector<std::int64_t> c(q.rank(), 0);
    c[i] = 1;
    gens.push_back(q.element(std::move(c)));
  }
  return gens;
}

ModuleElement random_combo(const PermModule& mod, const std::vector<ModuleElement>& gens,
                           Rng& rng) {
  ModuleElement acc = mod.zero();
  for (const auto& g : gens) {
    std::int64_t c = rng.range(-2, 2);
    if (c != 0) acc = mod.add(acc, mod.scale(g, c));
  }
  return acc;
}

AbelianElement random_subgroup_element(const AbelianSubgroup& s, Rng& rng) {
  const auto& q = s.ambient();
  AbelianElement acc = q.zero();
  for (const auto& g : s.generators()) {
    std::int64_t c = rng.range(-2, 2);
    if (c != 0) acc = q.add(acc, q.scale(g, c));
  }
  return acc;
}

// Hall separation for an infinite base: the least factorial j! making
// L + j! B^W agree with L on every element whose coordinates are bounded by
// the value box. Works through the diagonalization of L.
WindowLattice separate_for_box(const WindowLattice& nbar, const Box& value_box) {
  std::size_t dim = nbar.dim();
  auto sat = lat::saturate(nbar.lattice(), dim);
  lat::Mat r = lat::unimodular_inverse(sat.basis);

  Int beta = std::max<std::int64_t>(std::max(std::abs(value_box.free_min()), value_box.free_max()),
                                    1);
  for (auto m : value_box.group().torsion_moduli()) beta = std::max(beta, Int(m - 1));

  Int norm_bound = 0;
  for (std::size_t row = sat.rank; row < dim; ++row) {
    Int norm = 0;
    for (std::size_t j = 0; j < r.size(); ++j) norm += abs(r[j][row]);
    norm_bound = std::max(norm_bound, norm);
  }
  norm_bound *= beta;

  Int fact = 1;
  for (unsigned j = 1; j < 2000; ++j) {
    fact *= j;
    bool ok = fact > norm_bound;
    for (const auto& d : sat.diag) ok = ok && (d != 0) && (fact % d == 0);
    if (ok) return add_scaled_full(nbar, fact);
  }
  throw std::logic_error("separate_for_box: factorial schedule did not terminate");
}

}  // namespace

Scheme build_scheme(const WreathGroup& g, const GoursatTriplet& h) {
  Scheme s;
  s.group = g;
  s.h = h;
  s.normalizer_index = normalizer_index_in_module(h);
  if (!s.normalizer_index.is_finite())
    throw HypothesisError("[N : N_N(H)] is infinite; the construction hypothesis fails");

  std::vector<AbelianSubgroup> stabs;
  for (std::size_t l = 0; l < g.xset().orbit_count(); ++l) stabs.push_back(g.xset().stabilizer(l));
  s.dec = decompose(g.qgroup(), h.qpart(), stabs);

  bool r_finite_index = h.qpart().index().is_finite();
  bool nh_finite_index = h.npart().index().is_finite();
  bool nh_q_invariant = true;
  for (const auto& gen : full_group_generators(g.qgroup()))
    nh_q_invariant = nh_q_invariant && h.npart().invariant_under(gen);

  if (r_finite_index && nh_finite_index && nh_q_invariant) {
    s.branch = SchemeBranch::Shortcut;
    return s;
  }

  bool x_finite = g.xset().is_finite();
  bool u_finite = subgroup_order(s.dec.U).is_finite();
  bool base_finite = g.base().free_rank() == 0;
  bool q_rank_ok = g.qgroup().free_rank() <= 1;
  if (x_finite || (q_rank_ok && base_finite && u_finite)) {
    s.branch = SchemeBranch::Pullback;
    return s;
  }
  std::ostringstream os;
  os << "unsupported configuration: need X finite, or free-rank(Q) <= 1 with finite B and "
        "finite-order U, or the finite-index shortcut (got r_finite_index="
     << r_finite_index << " nh_finite_index=" << nh_finite_index
     << " nh_q_invariant=" << nh_q_invariant << " x_finite=" << x_finite
     << " u_finite=" << u_finite << " base_finite=" << base_finite << ")";
  throw UnsupportedError(os.str());
}

bool StageData::in_y(const XPoint& x) const {
  if (y_points) return std::binary_search(y_points->begin(), y_points->end(), x);
  const auto& sum = y_orbit_sums[x.orbit];
  const auto& q = sum.ambient();
  for (const auto& b : i_set)
    if (sum.contains(q.sub(x.coset, b))) return true;
  return false;
}

bool StageData::in_m(const ModuleElement& n) const {
  for (const auto& [x, v] : n.support()) {
    (void)v;
    if (!in_y(x)) return false;
  }
  return true;
}

StageData stage(const Scheme& scheme, unsigned i) {
  if (i < 1) throw std::invalid_argument("stage index starts at 1");
  const auto& g = scheme.group;
  const auto& q = g.qgroup();
  const auto& x = g.xset();

  StageData st;
  st.i = i;
  st.n_i = scheme.n(i);
  st.q_i = sum_subgroups(scheme.dec.R, power_subgroup(q, st.n_i));
  st.v_i = AbelianSubgroup::from_lattice(q, lat::scale(scheme.dec.V.lattice(), st.n_i));
  if (!(st.q_i == sum_subgroups(scheme.dec.R, st.v_i)))
    throw std::logic_error("stage: Q_i != R + V_i; decomposition is inconsistent");

  st.i_set = box(q, st.n_i).elements();
  st.z_i = window_points(st.i_set, x);
  st.e_i = box(g.base(), scheme.e(i));
  st.t_i = BoxPower(g.module(), st.e_i, st.z_i);

  for (std::size_t l = 0; l < x.orbit_count(); ++l)
    st.y_orbit_sums.push_back(
        sum_subgroups(sum_subgroups(scheme.dec.U, scheme.dec.W[l]), x.stabilizer(l)));

  if (scheme.branch == SchemeBranch::Shortcut) {
    st.n_i_sub = scheme.h.npart();
  } else {
    // Explicit finite Y_i.
    std::vector<XPoint> ypts;
    for (std::size_t l = 0; l < x.orbit_count(); ++l) {
      if (x.orbit_size(l).is_finite()) {
        for (const auto& rep : quotient_representatives(x.stabilizer(l)))
          ypts.push_back(XPoint{l, rep});
      } else {
        auto uw = sum_subgroups(scheme.dec.U, scheme.dec.W[l]);
        if (!subgroup_order(uw).is_finite())
          throw UnsupportedError("stage: Y_i is infinite for an infinite orbit");
        for (const auto& u : subgroup_elements(uw))
          for (const auto& b : st.i_set) ypts.push_back(x.point(l, q.add(u, b)));
      }
    }
    std::sort(ypts.begin(), ypts.end());
    ypts.erase(std::unique(ypts.begin(), ypts.end()), ypts.end());
    st.y_points = std::move(ypts);

    FactorMap fm(g.module(), st.v_i);
    GroupIndex xbar = fm.target().xset().size();
    if (!xbar.is_finite()) throw UnsupportedError("stage: factor target V_i\\X is infinite");
    std::map<XPoint, XPoint> fiber_reps;
    for (const auto& y : *st.y_points) {
      auto [it, fresh] = fiber_reps.emplace(fm.push_point(y), y);
      if (!fresh) throw std::logic_error("stage: Y_i meets a fiber twice");
    }
    if (Int(fiber_reps.size()) != xbar.value())
      throw std::logic_error("stage: Y_i misses a fiber of the factor map");

    st.nh_window = scheme.h.npart().intersect_window(*st.y_points);
    std::vector<ModuleElement> pushed;
    for (const auto& gen : st.nh_window->generators()) pushed.push_back(fm.push(gen));
    WindowLattice nbar = WindowLattice::from_elements(fm.target(), fm.target().xset().all_points(),
                                                      pushed);
    if (g.base().free_rank() > 0) nbar = separate_for_box(nbar, st.e_i);
    st.n_i_sub = Submodule::pullback(fm, std::move(nbar));
  }

  st.alpha = scheme.h.alpha();  // the R-generator lifts are shared verbatim
  for (const auto& vgen : st.v_i.generators())
    st.alpha.emplace_back(vgen, g.module().zero());

  st.k_i = GoursatTriplet::make(g, st.q_i, st.n_i_sub, st.alpha);
  if (!triplet_index(st.k_i).is_finite())
    throw std::logic_error("stage: K_i does not have finite index");
  st.f_i = ProductTransversal(g, st.i_set, st.t_i);
  return st;
}

VerifyReport verify_stage(const Scheme& scheme, const StageData& st, std::uint64_t samples,
                          std::uint64_t seed) {
  VerifyReport rep;
  const auto& g = scheme.group;
  const auto& h = scheme.h;

  // Exact window agreement. When the value box covers all of B (finite
  // base), T_i = B^{Z_i} and the two lattices must be identical; otherwise
  // T_i is the box-bounded part only, so the exact statement is one-sided
  // containment with the box agreement left to the sampling below.
  WindowLattice nh_z = h.npart().intersect_window(st.z_i);
  WindowLattice ni_z = st.n_i_sub.intersect_window(st.z_i);
  if (st.t_i.is_subgroup()) {
    if (!(nh_z == ni_z))
      rep.violations.push_back("window equality fails: N_H ∩ B^Z != N_i ∩ B^Z");
  } else {
    if (!lat::contains_lattice(ni_z.lattice(), nh_z.lattice()))
      rep.violations.push_back("N_H ∩ B^Z not contained in N_i ∩ B^Z");
  }
  ++rep.checks;

  // Exact one-sided containment on M_i.
  if (st.nh_window) {
    for (const auto& gen : st.nh_window->generators()) {
      ++rep.checks;
      if (!st.n_i_sub.contains(gen)) {
        rep.violations.push_back("N_H ∩ M_i not contained in N_i");
        break;
      }
    }
  }

  Rng rng(derive_seed(seed, "verify-stage", std::to_string(st.i)));
  WindowLattice nh_m = st.nh_window ? *st.nh_window : h.npart().intersect_window(st.z_i);
  std::vector<ModuleElement> nh_gens = nh_m.generators();

  Submodule nn_h = normalizer_in_module(h);
  WindowLattice nn_m =
      nn_h.intersect_window(st.y_points ? *st.y_points : st.z_i);
  std::vector<ModuleElement> nn_gens = nn_m.generators();

  std::vector<AbelianElement> v_gens = st.v_i.generators();
  Box g_box = box(g.qgroup(), st.n_i + 3);

  for (std::uint64_t s = 0; s < samples; ++s) {
    // T_i + (N_H ∩ M_i) avoids N_H Δ N_i.
    ModuleElement t = st.t_i.sample(rng);
    ModuleElement n = random_combo(g.module(), nh_gens, rng);
    ModuleElement sum = g.module().add(t, n);
    if (h.npart().contains(sum) != st.n_i_sub.contains(sum)) {
      rep.violations.push_back("sampled t + n lands in N_H Δ N_i");
      break;
    }
    // N_N(H) ∩ M_i normalizes K_i.
    ModuleElement m = random_combo(g.module(), nn_gens, rng);
    GroupElement me = g.embed(m);
    bool normalizes = true;
    for (const auto& [gen, a] : st.k_i.alpha())
      normalizes = normalizes && triplet_contains(st.k_i, g.conjugate(GroupElement{gen, a}, me));
    if (!normalizes) {
      rep.violations.push_back("sampled m in N_N(H) ∩ M_i does not normalize K_i");
      break;
    }
    // [v, g] ∈ N_i for v ∈ V_i.
    if (!v_gens.empty()) {
      AbelianElement v = random_subgroup_element(st.v_i, rng);
      GroupElement rand_g = g.make(g_box.sample(rng), st.t_i.sample(rng));
      GroupElement c = g.commutator(g.lift(v), rand_g);
      if (!c.q.is_zero() || !st.n_i_sub.contains(c.n)) {
        rep.violations.push_back("sampled [v, g] escapes N_i");
        break;
      }
    }
    rep.checks += 3;
  }
  return rep;
}

TransversalCertificate transversal_check(const StageData& st) {
  TransversalCertificate cert;
  std::ostringstream detail;

  auto mult_i = finite_to_one_multiplicity(st.i_set, st.q_i);
  if (!mult_i) {
    cert.not_yet = true;
    cert.detail = "I_i is not a finite-to-one transversal of Q_i";
    return cert;
  }
  cert.i_multiplicity = *mult_i;

  Submodule nn_k = normalizer_in_module(st.k_i);
  WindowLattice window_part = nn_k.intersect_window(st.z_i);
  GroupIndex iota = window_part.index_in_window();
  GroupIndex global = nn_k.index();

  bool exponent_ok = true;
  std::int64_t e_i = st.e_i.side();
  for (std::size_t c = 0; c < window_part.dim() && exponent_ok; ++c) {
    lat::Vec v(window_part.dim(), 0);
    v[c] = e_i;
    exponent_ok = lat::contains(window_part.lattice(), v);
  }
  bool saturated = iota.is_finite() && global.is_finite() && iota == global;

  if (!exponent_ok || !saturated) {
    cert.not_yet = true;
    detail << "not yet a certified transversal:";
    if (!exponent_ok) detail << " B^Z[e_i] not inside N_N(K_i) ∩ B^Z (e_i=" << e_i << ")";
    if (!saturated)
      detail << " window index " << iota.str() << " != global index " << global.str();
    cert.detail = detail.str();
    return cert;
  }
  Int t_size = st.t_i.size();
  if (t_size % iota.value() != 0) {
    cert.not_yet = true;
    cert.detail = "|T_i| not divisible by the window index";
    return cert;
  }
  cert.t_multiplicity = t_size / iota.value();
  cert.certified = true;
  detail << "I multiplicity " << cert.i_multiplicity << ", T multiplicity " << cert.t_multiplicity;
  cert.detail = detail.str();
  return cert;
}

ExperimentReport run_experiment(const Scheme& scheme, const ExperimentConfig& config) {
  ExperimentReport report;
  Enumeration enumeration(scheme.group);
  PairEnumeration pairs(enumeration);

  for (unsigned i = config.stage_min; i <= config.stage_max; ++i) {
    StageData st;
    try {
      st = stage(scheme, i);
    } catch (const std::exception& ex) {
      std::ostringstream os;
      os << "stage " << i << ": " << ex.what();
      report.stage_errors.push_back(os.str());
      StatRow row;
      row.stage = i;
      row.statistic = "stage";
      row.error = ex.what();
      report.rows.push_back(std::move(row));
      continue;
    }

    bool exact_feasible = config.exact && st.f_i.size() <= Int(config.exact_bound);
    std::vector<GroupElement> f_elements;
    if (exact_feasible) f_elements = st.f_i.elements(config.exact_bound);

    for (const auto& word : config.words) {
      StatRow row;
      row.stage = i;
      row.statistic = "p";
      row.label = word.label;
      if (exact_feasible) {
        row.value = p_statistic_exact(word.g, st.k_i, scheme.h, f_elements);
        row.mode = "exact";
      } else {
        std::uint64_t s = derive_seed(config.seed, "p", std::to_string(i) + ":" + word.label);
        auto est = p_statistic_mc(word.g, st.k_i, scheme.h, st.f_i, config.mc_samples, s);
        row.value = est.hit_fraction;
        row.mode = "mc";
        row.samples = est.samples;
        row.seed = s;
        row.stderr_ = est.stderr_;
      }
      report.rows.push_back(std::move(row));
    }

    for (const auto& word : config.words) {
      StatRow row;
      row.stage = i;
      row.statistic = "folner";
      row.label = word.label;
      row.value = folner_defect(st.f_i, word.g);
      row.mode = "exact";
      report.rows.push_back(std::move(row));
    }

    Box i_box = box(scheme.group.qgroup(), st.n_i);
    for (const auto& r : config.centered_shifts) {
      StatRow row;
      row.stage = i;
      row.statistic = "centered";
      std::ostringstream lbl;
      for (auto c : r.coords) lbl << c << ",";
      row.label = lbl.str();
      row.value = centered_defect(i_box, r);
      row.mode = "exact";
      report.rows.push_back(std::move(row));
    }

    for (const auto& word : config.words) {
      for (const auto& phi : config.phis) {
        StatRow row;
        row.stage = i;
        row.statistic = "adapted";
        row.label = word.label + "|" + phi.label;
        row.value = adapted_statistic(st.t_i, st.i_set, word.g, phi.phi, scheme.group);
        row.mode = "exact";
        report.rows.push_back(std::move(row));
      }
    }

    {
      StatRow row;
      row.stage = i;
      row.statistic = "d_prob";
      row.label = "K_i_vs_H";
      if (exact_feasible) {
        EmpiricalMeasure mu = empirical_measure(f_elements, st.k_i);
        EmpiricalMeasure nu = empirical_measure(f_elements, scheme.h);
        row.value = d_prob(mu, nu, config.depth, pairs);
        row.mode = "exact";
      } else {
        std::uint64_t s = derive_seed(config.seed, "d_prob", std::to_string(i));
        EmpiricalMeasure mu = empirical_measure_mc(st.f_i, st.k_i, config.mc_samples, s);
        EmpiricalMeasure nu =
            empirical_measure_mc(st.f_i, scheme.h, config.mc_samples, s ^ 0x9e3779b9u);
        row.value = d_prob(mu, nu, config.depth, pairs);
        row.mode = "mc";
        row.samples = config.mc_samples;
        row.seed = s;
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

}  // namespace wreathlab
