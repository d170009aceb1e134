#pragma once

#include <string>
#include <vector>

#include "wreathlab/weiss.hpp"

namespace wreathlab {

/// A parsed weiss-run configuration: the group, the target subgroup and the
/// experiment parameters.
struct ParsedExperiment {
  WreathGroup group;
  GoursatTriplet subgroup;
  ExperimentConfig config;
  std::string out_dir;
  std::string canonical_json;  // re-serialized config, input to the hash
};

ParsedExperiment parse_experiment_json(const std::string& text);

std::string group_to_json(const WreathGroup& g);
std::string triplet_to_json(const GoursatTriplet& t);

/// FNV-1a over the canonical serialization; recorded in every output file.
std::uint64_t config_hash(const std::string& canonical_json);

/// One CSV per statistic family:
/// stage,statistic,label,value_num,value_den,mode,samples,seed,stderr,error
std::string rows_to_csv(const std::vector<StatRow>& rows, const std::string& statistic);

std::vector<std::string> statistic_families(const std::vector<StatRow>& rows);

std::string manifest_json(const ParsedExperiment& px, const ExperimentReport& report);

/// Stability demo serialization (CSV rows + JSON summary).
struct StabilityDemoReport;
std::string demo_to_csv(const struct StabilityDemoReport& rep);
std::string demo_to_json(const struct StabilityDemoReport& rep);

}  // namespace wreathlab
