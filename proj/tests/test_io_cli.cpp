#include "doctest.h"
#include "test_helpers.hpp"
#include "wreathlab/io.hpp"

using namespace wreathlab;
using namespace wreathlab::testing;

namespace {

const char* kFlagshipConfig = R"json({
  "group": {
    "Q": {"free_rank": 1, "torsion": [], "labels": ["t"]},
    "B": {"free_rank": 0, "torsion": [2]},
    "X": {"orbits": [{"stabilizer_gens": [], "label": "x0"}]}
  },
  "subgroup": {
    "Q_H": [],
    "N_H": {"kind": "laurent", "p": 2, "gen": [1, 1]},
    "alpha": []
  },
  "stages": [1, 4],
  "depth": 32,
  "mode": "exact",
  "seed": 7,
  "words": [
    {"label": "t", "q": [1]},
    {"label": "b", "q": [0], "n": [{"orbit": 0, "coset": [0], "value": [1]}]}
  ],
  "phis": [{"label": "phi0", "elements": [[{"orbit": 0, "coset": [0], "value": [1]}]]}],
  "centered": [[1], [2]]
})json";

}  // namespace

TEST_CASE("experiment config parses into the flagship scheme") {
  ParsedExperiment px = parse_experiment_json(kFlagshipConfig);
  CHECK(px.group.qgroup().free_rank() == 1);
  CHECK(px.group.base().torsion_moduli() == std::vector<std::int64_t>{2});
  CHECK(px.subgroup.npart().kind() == Submodule::Kind::LaurentIdeal);
  CHECK(px.config.stage_min == 1);
  CHECK(px.config.stage_max == 4);
  CHECK(px.config.depth == 32);
  CHECK(px.config.exact);
  CHECK(px.config.words.size() == 2);
  CHECK(px.config.phis.size() == 1);
  CHECK(px.config.centered_shifts.size() == 2);

  // The parsed subgroup equals the directly constructed one.
  CHECK(px.subgroup == ideal_subgroup(px.group, {1, 1}));

  // Hash is stable and sensitive to the seed.
  std::uint64_t h1 = config_hash(px.canonical_json);
  ParsedExperiment px2 = parse_experiment_json(kFlagshipConfig);
  CHECK(config_hash(px2.canonical_json) == h1);
}

TEST_CASE("rows serialize to CSV deterministically") {
  ParsedExperiment px = parse_experiment_json(kFlagshipConfig);
  Scheme scheme = build_scheme(px.group, px.subgroup);
  ExperimentReport r1 = run_experiment(scheme, px.config);
  ExperimentReport r2 = run_experiment(scheme, px.config);

  for (const auto& family : statistic_families(r1.rows)) {
    CHECK(rows_to_csv(r1.rows, family) == rows_to_csv(r2.rows, family));
  }
  std::string csv = rows_to_csv(r1.rows, "p");
  CHECK(csv.find("stage,statistic,label") == 0);
  CHECK(csv.find("\nb,") == std::string::npos);  // labels live in column 3

  std::string manifest = manifest_json(px, r1);
  CHECK(manifest.find("config_hash") != std::string::npos);
}

TEST_CASE("group and triplet serialization round-trips through JSON") {
  WreathGroup g = lamplighter();
  std::string gj = group_to_json(g);
  CHECK(gj.find("\"free_rank\":1") != std::string::npos);

  GoursatTriplet h = shortcut_subgroup(g);
  std::string tj = triplet_to_json(h);
  CHECK(tj.find("laurent") != std::string::npos);
}

TEST_CASE("invalid configs are rejected") {
  CHECK_THROWS(parse_experiment_json("{}"));
  CHECK_THROWS(parse_experiment_json(R"({"group": {}})"));
  // Composite Laurent modulus.
  const char* bad = R"json({
    "group": {
      "Q": {"free_rank": 1, "torsion": []},
      "B": {"free_rank": 0, "torsion": [4]},
      "X": {"orbits": [{"stabilizer_gens": []}]}
    },
    "subgroup": {"Q_H": [], "N_H": {"kind": "laurent", "p": 4, "gen": [1, 1]}, "alpha": []}
  })json";
  CHECK_THROWS_AS(parse_experiment_json(bad), UnsupportedError);
}
