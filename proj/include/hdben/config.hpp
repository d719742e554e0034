#pragma once

#include <string>

#include <json.hpp>

#include "hdben/simulation.hpp"

namespace hdben {

enum class OutputFormat { csv, json };

// Everything a CLI run needs: estimator settings, scenario dimensions, and
// output handling. Defaults are the module defaults; a config file overrides
// individual keys.
struct RunConfig {
  Hyperparameters hyp;
  SamplerConfig sampler;
  HomoBayesConfig homo;
  EnetConfig enet;

  int n = 100;
  int d = 100;
  int s_beta = 10;
  int s_gamma = 10;
  std::array<double, 2> beta_range = {1.0, 2.0};
  std::array<double, 2> gamma_range = {0.5, 1.5};
  int replicates = 5;
  std::vector<Method> methods = all_methods();

  std::string output_dir = ".";
  OutputFormat format = OutputFormat::csv;
  bool save_draws = false;

  // One seed drives everything; setters keep the sub-configs in sync.
  void set_seed(std::uint64_t seed) {
    sampler.seed = seed;
    homo.seed = seed;
    enet.seed = seed;
  }
  std::uint64_t seed() const { return sampler.seed; }

  ScenarioSpec make_scenario() const;

  void validate() const;
};

// Parse a flat JSON object of known keys; unknown keys and out-of-domain
// values raise ConfigError naming the key.
RunConfig parse_config_json(const nlohmann::json& j);

// Reads and parses a JSON config file; missing or unreadable files raise
// ConfigError.
RunConfig parse_config(const std::string& path);

nlohmann::json to_json(const RunConfig& cfg);

}  // namespace hdben
