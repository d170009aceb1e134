#include "wreathlab/io.hpp"

#include <set>
#include <sstream>

#include "json.hpp"
#include "wreathlab/stability.hpp"

namespace wreathlab {

namespace {

using nlohmann::json;

FgAbelianGroup group_from(const json& j) {
  std::size_t d = j.value("free_rank", 0u);
  std::vector<std::int64_t> torsion = j.value("torsion", std::vector<std::int64_t>{});
  std::vector<std::string> labels = j.value("labels", std::vector<std::string>{});
  return FgAbelianGroup(d, std::move(torsion), std::move(labels));
}

json group_to(const FgAbelianGroup& g) {
  return json{{"free_rank", g.free_rank()}, {"torsion", g.torsion_moduli()}, {"labels", g.basis_labels()}};
}

AbelianElement elem_from(const FgAbelianGroup& g, const json& j) {
  return g.element(j.get<std::vector<std::int64_t>>());
}

QSet qset_from(const FgAbelianGroup& q, const json& j) {
  std::vector<AbelianSubgroup> stabs;
  std::vector<std::string> labels;
  for (const auto& orbit : j.at("orbits")) {
    std::vector<AbelianElement> gens;
    for (const auto& g : orbit.value("stabilizer_gens", json::array())) gens.push_back(elem_from(q, g));
    stabs.push_back(AbelianSubgroup::from_generators(q, gens));
    labels.push_back(orbit.value("label", std::string{}));
  }
  bool any_label = false;
  for (const auto& l : labels) any_label = any_label || !l.empty();
  if (!any_label) labels.clear();
  return QSet(q, std::move(stabs), std::move(labels));
}

ModuleElement module_elem_from(const PermModule& mod, const json& j) {
  std::vector<std::pair<XPoint, AbelianElement>> pairs;
  for (const auto& entry : j) {
    XPoint x{entry.at("orbit").get<std::size_t>(),
             elem_from(mod.xset().group(), entry.at("coset"))};
    pairs.emplace_back(std::move(x), elem_from(mod.base(), entry.at("value")));
  }
  return mod.from_pairs(pairs);
}

json module_elem_to(const ModuleElement& n) {
  json out = json::array();
  for (const auto& [x, v] : n.support())
    out.push_back(json{{"orbit", x.orbit}, {"coset", x.coset.coords}, {"value", v.coords}});
  return out;
}

Submodule submodule_from(const PermModule& mod, const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "laurent") {
    std::int64_t p = j.at("p").get<std::int64_t>();
    PolyFp gen{p, j.value("gen", std::vector<std::int64_t>{})};
    return Submodule::laurent(mod, std::move(gen));
  }
  if (kind == "finite") {
    std::vector<ModuleElement> gens;
    for (const auto& g : j.value("gens", json::array())) gens.push_back(module_elem_from(mod, g));
    return Submodule::finite_x(
        WindowLattice::from_elements(mod, mod.xset().all_points(), gens));
  }
  throw std::invalid_argument("unknown submodule kind: " + kind);
}

GoursatTriplet triplet_from(const WreathGroup& g, const json& j) {
  std::vector<AbelianElement> qgens;
  for (const auto& e : j.value("Q_H", json::array())) qgens.push_back(elem_from(g.qgroup(), e));
  AbelianSubgroup qh = AbelianSubgroup::from_generators(g.qgroup(), qgens);
  Submodule nh = submodule_from(g.module(), j.at("N_H"));
  std::vector<std::pair<AbelianElement, ModuleElement>> alpha;
  for (const auto& a : j.value("alpha", json::array()))
    alpha.emplace_back(elem_from(g.qgroup(), a.at("gen")), module_elem_from(g.module(), a.at("a")));
  return GoursatTriplet::make(g, std::move(qh), std::move(nh), std::move(alpha));
}

GroupElement word_from(const WreathGroup& g, const json& j) {
  AbelianElement q = j.contains("q") ? elem_from(g.qgroup(), j.at("q")) : g.qgroup().zero();
  ModuleElement n = j.contains("n") ? module_elem_from(g.module(), j.at("n")) : g.module().zero();
  return g.make(std::move(q), std::move(n));
}

}  // namespace

ParsedExperiment parse_experiment_json(const std::string& text) {
  json j = json::parse(text);
  const json& grp = j.at("group");
  FgAbelianGroup q = group_from(grp.at("Q"));
  FgAbelianGroup b = group_from(grp.at("B"));
  QSet x = qset_from(q, grp.at("X"));

  ParsedExperiment out{WreathGroup(q, b, x), {}, {}, {}, {}};
  out.subgroup = triplet_from(out.group, j.at("subgroup"));

  ExperimentConfig cfg;
  if (j.contains("stages")) {
    cfg.stage_min = j.at("stages").at(0).get<unsigned>();
    cfg.stage_max = j.at("stages").at(1).get<unsigned>();
  }
  cfg.depth = j.value("depth", 128u);
  cfg.seed = j.value("seed", std::uint64_t{1});
  if (j.contains("mode")) {
    const json& mode = j.at("mode");
    if (mode.is_string() && mode.get<std::string>() == "exact") {
      cfg.exact = true;
    } else if (mode.is_object() && mode.contains("mc")) {
      cfg.exact = false;
      cfg.mc_samples = mode.at("mc").get<std::uint64_t>();
    } else {
      throw std::invalid_argument("mode must be \"exact\" or {\"mc\": N}");
    }
  }
  for (const auto& w : j.value("words", json::array())) {
    WordSpec ws;
    ws.label = w.at("label").get<std::string>();
    ws.g = word_from(out.group, w);
    cfg.words.push_back(std::move(ws));
  }
  for (const auto& p : j.value("phis", json::array())) {
    PhiSpec ps;
    ps.label = p.at("label").get<std::string>();
    for (const auto& e : p.at("elements")) ps.phi.push_back(module_elem_from(out.group.module(), e));
    cfg.phis.push_back(std::move(ps));
  }
  for (const auto& c : j.value("centered", json::array()))
    cfg.centered_shifts.push_back(elem_from(q, c));
  out.config = std::move(cfg);
  out.out_dir = j.value("out", std::string{"."});

  // Canonical echo for hashing: re-serialize the fields that affect results.
  json canon;
  canon["group"] = json::parse(group_to_json(out.group));
  canon["subgroup"] = json::parse(triplet_to_json(out.subgroup));
  canon["stages"] = {out.config.stage_min, out.config.stage_max};
  canon["depth"] = out.config.depth;
  canon["seed"] = out.config.seed;
  canon["exact"] = out.config.exact;
  canon["mc_samples"] = out.config.mc_samples;
  canon["words"] = j.value("words", json::array());
  canon["phis"] = j.value("phis", json::array());
  canon["centered"] = j.value("centered", json::array());
  out.canonical_json = canon.dump();
  return out;
}

std::string group_to_json(const WreathGroup& g) {
  json orbits = json::array();
  for (std::size_t l = 0; l < g.xset().orbit_count(); ++l) {
    json gens = json::array();
    for (const auto& e : g.xset().stabilizer(l).generators()) gens.push_back(e.coords);
    orbits.push_back(json{{"stabilizer_gens", gens}, {"label", g.xset().labels()[l]}});
  }
  json j{{"Q", group_to(g.qgroup())}, {"B", group_to(g.base())}, {"X", json{{"orbits", orbits}}}};
  return j.dump();
}

std::string triplet_to_json(const GoursatTriplet& t) {
  json qh = json::array();
  for (const auto& e : t.qpart().generators()) qh.push_back(e.coords);
  json nh;
  switch (t.npart().kind()) {
    case Submodule::Kind::LaurentIdeal:
      nh = json{{"kind", "laurent"},
                {"p", t.npart().laurent_generator().p},
                {"gen", t.npart().laurent_generator().c}};
      break;
    case Submodule::Kind::FiniteX: {
      json gens = json::array();
      for (const auto& g : t.npart().finite_lattice().generators()) gens.push_back(module_elem_to(g));
      nh = json{{"kind", "finite"}, {"gens", gens}};
      break;
    }
    case Submodule::Kind::Pullback:
      nh = json{{"kind", "pullback"}, {"key", t.npart().canonical_key()}};
      break;
  }
  json alpha = json::array();
  for (const auto& [gen, a] : t.alpha())
    alpha.push_back(json{{"gen", gen.coords}, {"a", module_elem_to(a)}});
  return json{{"Q_H", qh}, {"N_H", nh}, {"alpha", alpha}}.dump();
}

std::uint64_t config_hash(const std::string& canonical_json) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_json) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string rows_to_csv(const std::vector<StatRow>& rows, const std::string& statistic) {
  std::ostringstream os;
  os << "stage,statistic,label,value_num,value_den,mode,samples,seed,stderr,error\n";
  for (const auto& r : rows) {
    if (r.statistic != statistic) continue;
    os << r.stage << "," << r.statistic << "," << r.label << ","
       << boost::multiprecision::numerator(r.value) << ","
       << boost::multiprecision::denominator(r.value) << "," << r.mode << "," << r.samples << ","
       << r.seed << "," << r.stderr_ << "," << r.error << "\n";
  }
  return os.str();
}

std::vector<std::string> statistic_families(const std::vector<StatRow>& rows) {
  std::set<std::string> fams;
  for (const auto& r : rows) fams.insert(r.statistic);
  return std::vector<std::string>(fams.begin(), fams.end());
}

std::string manifest_json(const ParsedExperiment& px, const ExperimentReport& report) {
  json j;
  j["config"] = json::parse(px.canonical_json);
  j["config_hash"] = config_hash(px.canonical_json);
  j["row_count"] = report.rows.size();
  j["stage_errors"] = report.stage_errors;
  j["families"] = statistic_families(report.rows);
  return j.dump(2);
}

std::string demo_to_csv(const StabilityDemoReport& rep) {
  std::ostringstream os;
  os << "word,defect_num,defect_den,bound_num,bound_den\n";
  for (std::size_t i = 0; i < rep.perturbed_defects.size(); ++i) {
    const auto& row = rep.perturbed_defects[i];
    const auto& bound = rep.lipschitz_bounds[i];
    os << row.label << "," << boost::multiprecision::numerator(row.defect) << ","
       << boost::multiprecision::denominator(row.defect) << ","
       << boost::multiprecision::numerator(bound.defect) << ","
       << boost::multiprecision::denominator(bound.defect) << "\n";
  }
  return os.str();
}

std::string demo_to_json(const StabilityDemoReport& rep) {
  auto rat = [](const Rat& r) {
    return json{{"num", boost::multiprecision::numerator(r).str()},
                {"den", boost::multiprecision::denominator(r).str()}};
  };
  json j;
  j["degree"] = rep.degree;
  j["k"] = rep.k;
  j["j_max"] = rep.j_max;
  j["perturbations"] = rep.perturbations;
  j["seed"] = rep.seed;
  j["witness_exact"] = rep.witness_exact;
  j["distance_b"] = rat(rep.distance_b);
  j["distance_t"] = rat(rep.distance_t);
  j["bounds_hold"] = rep.bounds_hold;
  json defects = json::array();
  for (const auto& d : rep.perturbed_defects) defects.push_back(json{{"word", d.label}, {"defect", rat(d.defect)}});
  j["perturbed_defects"] = defects;
  auto images = [](const Permutation& p) {
    std::vector<std::uint32_t> im(p.degree());
    for (std::size_t x = 0; x < p.degree(); ++x) im[x] = p(static_cast<std::uint32_t>(x));
    return im;
  };
  j["witness_b"] = images(rep.witness_b);
  j["witness_t"] = images(rep.witness_t);
  j["perturbed_t"] = images(rep.perturbed_t);
  return j.dump(2);
}

}  // namespace wreathlab
