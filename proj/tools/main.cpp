// Command-line entry points: goursat-audit, weiss-run, stability-demo and
// metrics-selftest. Exit codes: 0 success, 1 verification failure, 2 bad
// configuration.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "wreathlab/chabauty.hpp"
#include "wreathlab/finite_model.hpp"
#include "wreathlab/io.hpp"
#include "wreathlab/stability.hpp"
#include "wreathlab/weiss.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitConfigError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body;
}

int run_goursat_audit(const std::vector<std::int64_t>& q_moduli,
                      const std::vector<std::int64_t>& b_moduli, std::size_t bound,
                      bool inject_fault) {
  wreathlab::AuditReport rep = wreathlab::goursat_audit(q_moduli, b_moduli, bound, inject_fault);
  std::cout << "brute-force subgroups: " << rep.brute_subgroups << "\n"
            << "validated triplets:    " << rep.triplet_subgroups << "\n";
  for (const auto& m : rep.mismatches) std::cout << "MISMATCH: " << m << "\n";
  std::cout << (rep.ok ? "AUDIT PASS" : "AUDIT FAIL") << "\n";
  return rep.ok ? kExitOk : kExitVerificationFailure;
}

int run_weiss(const std::string& config_path, std::uint64_t seed_override, bool has_seed,
              unsigned depth_override, bool has_depth, const std::string& mode_override,
              const std::string& out_override, std::uint64_t exact_bound) {
  wreathlab::ParsedExperiment px = wreathlab::parse_experiment_json(read_file(config_path));
  if (has_seed) px.config.seed = seed_override;
  if (has_depth) px.config.depth = depth_override;
  px.config.exact_bound = exact_bound;
  if (!mode_override.empty()) {
    if (mode_override == "exact") {
      px.config.exact = true;
    } else if (mode_override.rfind("mc:", 0) == 0) {
      px.config.exact = false;
      px.config.mc_samples = std::stoull(mode_override.substr(3));
    } else {
      std::cerr << "mode must be exact or mc:N\n";
      return kExitConfigError;
    }
  }
  if (!out_override.empty()) px.out_dir = out_override;

  wreathlab::Scheme scheme = wreathlab::build_scheme(px.group, px.subgroup);
  wreathlab::ExperimentReport report = wreathlab::run_experiment(scheme, px.config);

  std::filesystem::create_directories(px.out_dir);
  for (const auto& family : wreathlab::statistic_families(report.rows)) {
    write_file(std::filesystem::path(px.out_dir) / (family + ".csv"),
               wreathlab::rows_to_csv(report.rows, family));
  }
  write_file(std::filesystem::path(px.out_dir) / "manifest.json",
             wreathlab::manifest_json(px, report));

  // Convergence summary: first and last value per (statistic, label).
  std::cout << "statistic/label: first -> last (stage range " << px.config.stage_min << ".."
            << px.config.stage_max << ")\n";
  std::map<std::string, std::pair<wreathlab::StatRow, wreathlab::StatRow>> span;
  for (const auto& r : report.rows) {
    if (!r.error.empty()) continue;
    std::string key = r.statistic + "/" + r.label;
    auto it = span.find(key);
    if (it == span.end())
      span.emplace(key, std::make_pair(r, r));
    else
      it->second.second = r;
  }
  for (const auto& [key, fl] : span) {
    std::cout << "  " << key << ": " << fl.first.value << " -> " << fl.second.value << "\n";
  }
  for (const auto& e : report.stage_errors) std::cout << "stage error: " << e << "\n";
  return report.stage_errors.empty() ? kExitOk : kExitVerificationFailure;
}

int run_stability_demo(unsigned k, unsigned j_max, unsigned perturbations, std::uint64_t seed,
                       const std::string& out_dir) {
  wreathlab::StabilityDemoReport rep = wreathlab::demo_cor_1_6(k, j_max, perturbations, seed);
  std::cout << "degree n = " << rep.degree << "\n"
            << "exact witness relations all satisfied: " << (rep.witness_exact ? "yes" : "no")
            << "\n"
            << "d_n(b, beta) = " << rep.distance_b << ", d_n(t, tau) = " << rep.distance_t << "\n"
            << "perturbed defects within Lipschitz bounds: " << (rep.bounds_hold ? "yes" : "no")
            << "\n";
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_file(std::filesystem::path(out_dir) / "stability_demo.csv", wreathlab::demo_to_csv(rep));
    write_file(std::filesystem::path(out_dir) / "stability_demo.json",
               wreathlab::demo_to_json(rep));
  }
  return (rep.witness_exact && rep.bounds_hold) ? kExitOk : kExitVerificationFailure;
}

int run_metrics_selftest(std::uint64_t seed) {
  using namespace wreathlab;
  std::size_t failures = 0;
  auto expect = [&](bool cond, const char* what) {
    if (!cond) {
      ++failures;
      std::cout << "FAIL: " << what << "\n";
    }
  };

  // Hamming metric axioms and bi-invariance, fuzzed on S(64).
  Rng rng(derive_seed(seed, "selftest"));
  auto random_perm = [&](std::size_t n) {
    std::vector<std::uint32_t> im(n);
    for (std::size_t i = 0; i < n; ++i) im[i] = static_cast<std::uint32_t>(i);
    for (std::size_t i = n; i > 1; --i) std::swap(im[i - 1], im[rng.below(i)]);
    return Permutation(std::move(im));
  };
  for (int it = 0; it < 500; ++it) {
    Permutation a = random_perm(64), b = random_perm(64), c = random_perm(64);
    expect(hamming(a, a) == 0, "d(a,a) = 0");
    expect(hamming(a, b) == hamming(b, a), "symmetry");
    expect(hamming(a, c) <= hamming(a, b) + hamming(b, c), "triangle");
    expect(hamming(c.compose(a), c.compose(b)) == hamming(a, b), "left invariance");
    expect(hamming(a.compose(c), b.compose(c)) == hamming(a, b), "right invariance");
  }

  // Commutator identities in the lamplighter quotient, via multiplication.
  LamplighterQuotient lq = lamplighter_quotient(4);
  const auto& g = lq.group;
  std::vector<GroupElement> elems = g.all_elements();
  auto random_elem = [&]() { return elems[rng.below(elems.size())]; };
  for (int it = 0; it < 500; ++it) {
    GroupElement x = random_elem(), y = random_elem(), z = random_elem();
    GroupElement lhs = g.commutator(g.multiply(x, y), z);
    GroupElement rhs = g.multiply(g.conjugate(g.commutator(x, z), y), g.commutator(y, z));
    expect(lhs == rhs, "[xy,z] = [x,z]^y [y,z]");
    GroupElement lhs2 = g.commutator(x, g.multiply(y, z));
    GroupElement rhs2 = g.multiply(g.commutator(x, z), g.conjugate(g.commutator(x, y), z));
    expect(lhs2 == rhs2, "[x,yz] = [x,z][x,y]^z");
    // Split metabelian form: the module part of [qn, rm] is [q,m] - [r,n].
    GroupElement qn = random_elem(), rm = random_elem();
    GroupElement comm = g.commutator(qn, rm);
    GroupElement t1 = g.commutator(g.lift(qn.q), g.embed(rm.n));
    GroupElement t2 = g.commutator(g.lift(rm.q), g.embed(qn.n));
    expect(comm.q.is_zero() && t1.q.is_zero() && t2.q.is_zero(),
           "metabelian commutators land in N");
    expect(comm.n == g.module().sub(t1.n, t2.n), "[qn,rm] = [q,m] - [r,n]");
  }
  std::cout << (failures == 0 ? "SELFTEST PASS" : "SELFTEST FAIL") << "\n";
  return failures == 0 ? kExitOk : kExitVerificationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wreathlab: subgroup approximation experiments in permutational wreath products"};
  app.require_subcommand(1);

  // goursat-audit
  auto* audit = app.add_subcommand("goursat-audit",
                                   "brute-force subgroup list vs validated triplets on a finite "
                                   "quotient (regular action)");
  std::vector<std::int64_t> q_moduli{2};
  std::vector<std::int64_t> b_moduli{2};
  std::size_t audit_bound = 10000;
  bool inject_fault = false;
  audit->add_option("--q", q_moduli, "torsion moduli of Q (invariant-factor order)");
  audit->add_option("--b", b_moduli, "torsion moduli of B (invariant-factor order)");
  audit->add_option("--bound", audit_bound, "largest quotient order accepted")
      ->envname("WREATHLAB_AUDIT_BOUND");
  audit->add_flag("--self-test-mutate", inject_fault,
                  "negative control: flip one membership answer");

  // weiss-run
  auto* weiss = app.add_subcommand("weiss-run", "run the stage statistics battery from a config");
  std::string config_path;
  std::uint64_t seed = 0;
  unsigned depth = 0;
  std::string mode, out_dir;
  std::uint64_t exact_bound = std::uint64_t(1) << 24;
  weiss->add_option("--config", config_path, "experiment JSON")->required();
  auto* seed_opt = weiss->add_option("--seed", seed, "master seed override");
  auto* depth_opt = weiss->add_option("--depth", depth, "metric truncation depth override");
  weiss->add_option("--mode", mode, "exact or mc:N");
  weiss->add_option("--out", out_dir, "output directory override");
  weiss->add_option("--exact-bound", exact_bound,
                    "largest |F_i| evaluated exactly before falling back to sampling")
      ->envname("WREATHLAB_EXACT_BOUND");

  // stability-demo
  auto* demo = app.add_subcommand("stability-demo", "relation defects in Z/2 wr Z/k faithful action");
  unsigned demo_k = 4, demo_jmax = 12, demo_perturbations = 0;
  std::uint64_t demo_seed = 1;
  std::string demo_out;
  unsigned demo_k_bound = 10;
  demo->add_option("--k", demo_k, "cyclic order of the top group");
  demo->add_option("--j-max", demo_jmax, "largest relation exponent checked");
  demo->add_option("--perturbations", demo_perturbations, "random transpositions applied to tau");
  demo->add_option("--seed", demo_seed, "seed for the perturbations");
  demo->add_option("--out", demo_out, "output directory");
  demo->add_option("--k-bound", demo_k_bound, "largest accepted k (degree is k * 2^k)")
      ->envname("WREATHLAB_DEMO_K_BOUND");

  // metrics-selftest
  auto* self = app.add_subcommand("metrics-selftest", "metric axioms and commutator identities");
  std::uint64_t self_seed = 1;
  self->add_option("--seed", self_seed, "fuzzing seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*audit) return run_goursat_audit(q_moduli, b_moduli, audit_bound, inject_fault);
    if (*weiss)
      return run_weiss(config_path, seed, seed_opt->count() > 0, depth, depth_opt->count() > 0,
                       mode, out_dir, exact_bound);
    if (*demo) {
      if (demo_k > demo_k_bound) {
        std::cerr << "configuration error: k = " << demo_k << " exceeds the bound "
                  << demo_k_bound << "\n";
        return kExitConfigError;
      }
      return run_stability_demo(demo_k, demo_jmax, demo_perturbations, demo_seed, demo_out);
    }
    if (*self) return run_metrics_selftest(self_seed);
  } catch (const std::invalid_argument& ex) {
    std::cerr << "configuration error: " << ex.what() << "\n";
    return kExitConfigError;
  } catch (const wreathlab::UnsupportedError& ex) {
    std::cerr << "configuration error: " << ex.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitVerificationFailure;
  }
  return kExitConfigError;
}
