#pragma once

#include <string>
#include <vector>

#include "hdben/config.hpp"

namespace hdben {

// Process exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitExperiment = 4;

// Fit the heteroscedastic model to a CSV dataset; writes summary.csv (or
// .json), meta.json, and optionally draws.csv into cfg.output_dir.
int cmd_fit(const RunConfig& cfg, const std::string& data_path);

// Run the configured scenario; writes results.csv, results_summary.csv, and
// meta.json. Returns kExitExperiment when some method fails on every
// replicate.
int cmd_simulate(const RunConfig& cfg);

// Rebuild one of the benchmark comparison tables ("table2" or "table3") at
// the named profile ("desk" or "full"); writes the raw results files plus the
// pivoted table CSV.
int cmd_reproduce(const std::string& table, const std::string& profile, const RunConfig& cfg);

// Scenario grids behind cmd_reproduce, exposed for tests.
std::vector<ScenarioSpec> table2_specs(const std::string& profile, const RunConfig& cfg);
std::vector<ScenarioSpec> table3_specs(const std::string& profile, const RunConfig& cfg);

// Apply a named run profile to the sampler/replication settings.
void apply_profile(RunConfig& cfg, const std::string& profile);

}  // namespace hdben
