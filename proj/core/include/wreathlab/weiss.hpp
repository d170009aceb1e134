#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wreathlab/chabauty.hpp"

namespace wreathlab {

enum class SchemeBranch {
  /// K_i = (Q_i, N_H, alpha_i): N_H already has finite index and is
  /// Q-invariant, with Q_H of finite index.
  Shortcut,
  /// N_i is pulled back from the finite factor V_i\X.
  Pullback,
};

/// Everything fixed across stages: the target subgroup, the structure
/// decomposition and the factorial transversal schedule.
struct Scheme {
  WreathGroup group;
  GoursatTriplet h;
  DecompositionScheme dec;
  SchemeBranch branch = SchemeBranch::Pullback;
  GroupIndex normalizer_index;
  std::int64_t schedule_cap = std::int64_t(1) << 40;

  std::int64_t n(unsigned i) const { return static_cast<std::int64_t>(i) * dec.k; }
  std::int64_t e(unsigned i) const { return capped_factorial(i, schedule_cap); }
};

/// Validates the hypotheses and fixes the construction constants.
/// Throws HypothesisError when [N : N_N(H)] is infinite and UnsupportedError
/// for configurations outside the supported set.
Scheme build_scheme(const WreathGroup& g, const GoursatTriplet& h);

/// All per-index objects of one approximation stage.
struct StageData {
  unsigned i = 0;
  std::int64_t n_i = 0;
  AbelianSubgroup q_i;
  AbelianSubgroup v_i;
  std::vector<AbelianElement> i_set;
  std::vector<XPoint> z_i;
  Box e_i;
  BoxPower t_i;
  std::vector<AbelianSubgroup> y_orbit_sums;        // U + W_l + S_l per orbit
  std::optional<std::vector<XPoint>> y_points;      // explicit Y_i when finite
  std::optional<WindowLattice> nh_window;           // N_H ∩ B^{Y_i} (pullback branch)
  Submodule n_i_sub;
  std::vector<std::pair<AbelianElement, ModuleElement>> alpha;
  GoursatTriplet k_i;
  ProductTransversal f_i;

  bool in_y(const XPoint& x) const;
  bool in_m(const ModuleElement& n) const;
};

StageData stage(const Scheme& scheme, unsigned i);

struct VerifyReport {
  std::vector<std::string> violations;
  std::uint64_t checks = 0;
  bool ok() const { return violations.empty(); }
};

/// Exact window-equality checks plus seeded sampling of the stage
/// invariants. Any violation indicates an implementation bug, not
/// statistical noise.
VerifyReport verify_stage(const Scheme& scheme, const StageData& st, std::uint64_t samples,
                          std::uint64_t seed);

struct TransversalCertificate {
  bool certified = false;
  bool not_yet = false;
  std::string detail;
  Int i_multiplicity = 0;
  Int t_multiplicity = 0;
};

/// Certifies that F_i = I_i T_i is a finite-to-one transversal of N_G(K_i):
/// I_i against Q_i by exact counting, T_i against N_N(K_i) by the exponent
/// containment B^{Z_i}[e_i] <= N_N(K_i) plus window index saturation.
TransversalCertificate transversal_check(const StageData& st);

struct WordSpec {
  std::string label;
  GroupElement g;
};

struct PhiSpec {
  std::string label;
  std::vector<ModuleElement> phi;
};

struct ExperimentConfig {
  unsigned stage_min = 1;
  unsigned stage_max = 10;
  unsigned depth = 128;
  bool exact = true;
  std::uint64_t mc_samples = 100000;
  std::uint64_t seed = 1;
  std::uint64_t exact_bound = std::uint64_t(1) << 24;
  std::vector<WordSpec> words;
  std::vector<PhiSpec> phis;
  std::vector<AbelianElement> centered_shifts;
};

struct StatRow {
  unsigned stage = 0;
  std::string statistic;
  std::string label;
  Rat value;
  std::string mode;  // "exact" or "mc"
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double stderr_ = 0.0;
  std::string error;
};

struct ExperimentReport {
  std::vector<StatRow> rows;
  std::vector<std::string> stage_errors;
};

/// Runs the full per-stage statistics battery; stage failures are recorded
/// and later stages still run.
ExperimentReport run_experiment(const Scheme& scheme, const ExperimentConfig& config);

}  // namespace wreathlab
