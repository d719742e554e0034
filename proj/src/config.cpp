#include "hdben/config.hpp"

#include <fstream>

#include <json.hpp>

namespace hdben {

using nlohmann::json;

ScenarioSpec RunConfig::make_scenario() const {
  ScenarioSpec spec;
  spec.n = n;
  spec.d = d;
  spec.s_beta = s_beta;
  spec.s_gamma = s_gamma;
  spec.beta_range = beta_range;
  spec.gamma_range = gamma_range;
  spec.replicates = replicates;
  spec.methods = methods;
  spec.seed = seed();
  spec.hyp = hyp;
  spec.sampler = sampler;
  spec.homo = homo;
  spec.enet = enet;
  return spec;
}

void RunConfig::validate() const {
  make_scenario().validate();
  if (output_dir.empty()) throw ContractViolation("output_dir must not be empty");
}

namespace {

long long as_integer(const std::string& key, const json& v) {
  if (!v.is_number_integer() && !v.is_number_unsigned())
    throw ConfigError(key, "expected an integer");
  return v.get<long long>();
}

double as_number(const std::string& key, const json& v) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  return v.get<double>();
}

bool as_boolean(const std::string& key, const json& v) {
  if (!v.is_boolean()) throw ConfigError(key, "expected a boolean");
  return v.get<bool>();
}

std::string as_string(const std::string& key, const json& v) {
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

std::array<double, 2> as_range(const std::string& key, const json& v) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError(key, "expected an array of two numbers");
  std::array<double, 2> r = {v[0].get<double>(), v[1].get<double>()};
  if (!(r[0] <= r[1])) throw ConfigError(key, "range must be ordered");
  return r;
}

int positive_int(const std::string& key, const json& v) {
  const long long x = as_integer(key, v);
  if (x < 1 || x > std::numeric_limits<int>::max()) throw ConfigError(key, "must be a positive integer");
  return static_cast<int>(x);
}

int nonnegative_int(const std::string& key, const json& v) {
  const long long x = as_integer(key, v);
  if (x < 0 || x > std::numeric_limits<int>::max()) throw ConfigError(key, "must be a nonnegative integer");
  return static_cast<int>(x);
}

double positive_number(const std::string& key, const json& v) {
  const double x = as_number(key, v);
  if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError(key, "must be positive and finite");
  return x;
}

}  // namespace

RunConfig parse_config_json(const json& j) {
  if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");
  RunConfig cfg;

  for (const auto& [key, value] : j.items()) {
    if (key == "a_beta1") cfg.hyp.a_beta1 = positive_number(key, value);
    else if (key == "b_beta1") cfg.hyp.b_beta1 = positive_number(key, value);
    else if (key == "a_beta2") cfg.hyp.a_beta2 = positive_number(key, value);
    else if (key == "b_beta2") cfg.hyp.b_beta2 = positive_number(key, value);
    else if (key == "a_gamma1") cfg.hyp.a_gamma1 = positive_number(key, value);
    else if (key == "b_gamma1") cfg.hyp.b_gamma1 = positive_number(key, value);
    else if (key == "a_gamma2") cfg.hyp.a_gamma2 = positive_number(key, value);
    else if (key == "b_gamma2") cfg.hyp.b_gamma2 = positive_number(key, value);
    else if (key == "iterations") {
      cfg.sampler.iterations = positive_int(key, value);
      cfg.homo.iterations = cfg.sampler.iterations;
    } else if (key == "burn_in") {
      cfg.sampler.burn_in = nonnegative_int(key, value);
      cfg.homo.burn_in = cfg.sampler.burn_in;
    } else if (key == "thinning") {
      cfg.sampler.thinning = positive_int(key, value);
      cfg.homo.thinning = cfg.sampler.thinning;
    } else if (key == "chains") {
      cfg.sampler.chains = positive_int(key, value);
      cfg.homo.chains = cfg.sampler.chains;
    } else if (key == "seed") {
      const long long s = as_integer(key, value);
      if (s < 0) throw ConfigError(key, "must be nonnegative");
      cfg.set_seed(static_cast<std::uint64_t>(s));
    } else if (key == "mh_step_init") {
      cfg.sampler.mh_step_init = positive_number(key, value);
    } else if (key == "adapt_enabled") {
      cfg.sampler.adapt_enabled = as_boolean(key, value);
    } else if (key == "adapt_window") {
      cfg.sampler.adapt_window = positive_int(key, value);
    } else if (key == "adapt_target") {
      const double t = as_number(key, value);
      if (!(t >= 0.1 && t <= 0.6)) throw ConfigError(key, "must lie in [0.1, 0.6]");
      cfg.sampler.adapt_target = t;
    } else if (key == "tau_update_mode") {
      const std::string mode = as_string(key, value);
      if (mode == "paper") cfg.sampler.tau_update_mode = TauUpdateMode::paper;
      else if (mode == "reciprocal") cfg.sampler.tau_update_mode = TauUpdateMode::reciprocal;
      else throw ConfigError(key, "must be 'paper' or 'reciprocal'");
    } else if (key == "beta_floor") {
      cfg.sampler.beta_floor = positive_number(key, value);
    } else if (key == "sigma2_shape") {
      cfg.homo.sigma2_shape = positive_number(key, value);
    } else if (key == "sigma2_rate") {
      cfg.homo.sigma2_rate = positive_number(key, value);
    } else if (key == "max_iter") {
      cfg.enet.max_iter = positive_int(key, value);
    } else if (key == "tol") {
      cfg.enet.tol = positive_number(key, value);
    } else if (key == "cv_folds") {
      const int f = positive_int(key, value);
      if (f < 2) throw ConfigError(key, "must be >= 2");
      cfg.enet.cv_folds = f;
    } else if (key == "lambda_grid_size") {
      const int g = positive_int(key, value);
      if (g < 2) throw ConfigError(key, "must be >= 2");
      cfg.enet.lambda_grid_size = g;
    } else if (key == "n") {
      cfg.n = positive_int(key, value);
    } else if (key == "d") {
      cfg.d = positive_int(key, value);
    } else if (key == "s_beta") {
      cfg.s_beta = nonnegative_int(key, value);
    } else if (key == "s_gamma") {
      cfg.s_gamma = nonnegative_int(key, value);
    } else if (key == "beta_range") {
      cfg.beta_range = as_range(key, value);
    } else if (key == "gamma_range") {
      cfg.gamma_range = as_range(key, value);
    } else if (key == "replicates") {
      cfg.replicates = positive_int(key, value);
    } else if (key == "methods") {
      if (!value.is_array() || value.empty()) throw ConfigError(key, "expected a nonempty array of method names");
      std::vector<Method> methods;
      for (const auto& item : value) {
        const std::string name = as_string(key, item);
        auto m = parse_method(name);
        if (!m) throw ConfigError(key, "unknown method '" + name + "'");
        methods.push_back(*m);
      }
      cfg.methods = std::move(methods);
    } else if (key == "output_dir") {
      cfg.output_dir = as_string(key, value);
      if (cfg.output_dir.empty()) throw ConfigError(key, "must not be empty");
    } else if (key == "format") {
      const std::string f = as_string(key, value);
      if (f == "csv") cfg.format = OutputFormat::csv;
      else if (f == "json") cfg.format = OutputFormat::json;
      else throw ConfigError(key, "must be 'csv' or 'json'");
    } else {
      throw ConfigError(key, "unknown key");
    }
  }

  // Cross-field checks, named after the keys a user would fix.
  if (cfg.sampler.burn_in >= cfg.sampler.iterations)
    throw ConfigError("burn_in", "must be smaller than iterations");
  if ((cfg.sampler.iterations - cfg.sampler.burn_in) % cfg.sampler.thinning != 0)
    throw ConfigError("thinning", "iterations - burn_in must be divisible by thinning");
  if (cfg.s_beta > cfg.d) throw ConfigError("s_beta", "must not exceed d");
  if (cfg.s_gamma > cfg.d) throw ConfigError("s_gamma", "must not exceed d");
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
  }
  return parse_config_json(j);
}

json to_json(const RunConfig& cfg) {
  json j;
  j["a_beta1"] = cfg.hyp.a_beta1;
  j["b_beta1"] = cfg.hyp.b_beta1;
  j["a_beta2"] = cfg.hyp.a_beta2;
  j["b_beta2"] = cfg.hyp.b_beta2;
  j["a_gamma1"] = cfg.hyp.a_gamma1;
  j["b_gamma1"] = cfg.hyp.b_gamma1;
  j["a_gamma2"] = cfg.hyp.a_gamma2;
  j["b_gamma2"] = cfg.hyp.b_gamma2;
  j["iterations"] = cfg.sampler.iterations;
  j["burn_in"] = cfg.sampler.burn_in;
  j["thinning"] = cfg.sampler.thinning;
  j["chains"] = cfg.sampler.chains;
  j["seed"] = cfg.seed();
  j["mh_step_init"] = cfg.sampler.mh_step_init;
  j["adapt_enabled"] = cfg.sampler.adapt_enabled;
  j["adapt_window"] = cfg.sampler.adapt_window;
  j["adapt_target"] = cfg.sampler.adapt_target;
  j["tau_update_mode"] =
      cfg.sampler.tau_update_mode == TauUpdateMode::paper ? "paper" : "reciprocal";
  j["beta_floor"] = cfg.sampler.beta_floor;
  j["sigma2_shape"] = cfg.homo.sigma2_shape;
  j["sigma2_rate"] = cfg.homo.sigma2_rate;
  j["max_iter"] = cfg.enet.max_iter;
  j["tol"] = cfg.enet.tol;
  j["cv_folds"] = cfg.enet.cv_folds;
  j["lambda_grid_size"] = cfg.enet.lambda_grid_size;
  j["n"] = cfg.n;
  j["d"] = cfg.d;
  j["s_beta"] = cfg.s_beta;
  j["s_gamma"] = cfg.s_gamma;
  j["beta_range"] = cfg.beta_range;
  j["gamma_range"] = cfg.gamma_range;
  j["replicates"] = cfg.replicates;
  json methods = json::array();
  for (Method m : cfg.methods) methods.push_back(to_string(m));
  j["methods"] = methods;
  j["output_dir"] = cfg.output_dir;
  j["format"] = cfg.format == OutputFormat::csv ? "csv" : "json";
  return j;
}

}  // namespace hdben
