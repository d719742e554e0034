#pragma once

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hdben/baselines.hpp"
#include "hdben/diagnostics.hpp"
#include "hdben/samplers.hpp"
#include "hdben/types.hpp"

namespace hdben {

enum class Method { ols, lasso, enet, blasso, ben, hdben };

std::string to_string(Method m);
std::optional<Method> parse_method(const std::string& name);

inline const std::vector<Method>& all_methods() {
  static const std::vector<Method> v = {Method::ols,    Method::lasso, Method::enet,
                                        Method::blasso, Method::ben,   Method::hdben};
  return v;
}

// One simulation cell: data-generating dimensions plus the estimator settings
// shared by every replicate of the cell.
struct ScenarioSpec {
  int n = 100;
  int d = 100;
  int s_beta = 10;
  int s_gamma = 10;
  std::array<double, 2> beta_range = {1.0, 2.0};
  std::array<double, 2> gamma_range = {0.5, 1.5};
  int replicates = 5;
  std::vector<Method> methods = all_methods();
  std::uint64_t seed = 42;

  Hyperparameters hyp;
  SamplerConfig sampler;
  HomoBayesConfig homo;
  EnetConfig enet;

  void validate() const {
    if (n < 1 || d < 1) throw ContractViolation("scenario must have n >= 1 and d >= 1");
    if (s_beta < 0 || s_beta > d || s_gamma < 0 || s_gamma > d)
      throw ContractViolation("sparsity levels must lie in [0, d]");
    if (!(beta_range[0] <= beta_range[1]) || !(gamma_range[0] <= gamma_range[1]))
      throw ContractViolation("coefficient ranges must be ordered");
    if (replicates < 1) throw ContractViolation("replicates must be >= 1");
    hyp.validate();
    sampler.validate();
    homo.validate();
    enet.validate();
  }
};

// Synthetic dataset for one replicate: X entries iid standard normal, uniform
// coefficients on seeded uniformly-chosen supports, heteroscedastic Gaussian
// noise with variance exp(x_i' gamma0). Deterministic in (spec.seed,
// replicate_index) and shared by every method of the replicate.
Dataset generate_dataset(const ScenarioSpec& spec, int replicate_index);

struct ReplicateRecord {
  Method method = Method::ols;
  int replicate = 0;
  bool failed = false;
  std::string error;
  VectorXd beta_hat;
  VectorXd gamma_hat;  // heteroscedastic fits only
  double l2err = std::numeric_limits<double>::quiet_NaN();
  SupportMetrics beta_support;
  SupportMetrics gamma_support;
  double max_rhat_beta = std::numeric_limits<double>::quiet_NaN();
  double min_ess_beta = std::numeric_limits<double>::quiet_NaN();
  double mh_acceptance = std::numeric_limits<double>::quiet_NaN();
  double seconds = 0.0;
};

// Fit one method on one replicate's data. Estimator randomness derives from
// (spec.seed, replicate_index, method); failures are recorded, not thrown.
ReplicateRecord run_replicate(const ScenarioSpec& spec, int replicate_index, Method method);

struct MethodAggregate {
  double mean_l2err = std::numeric_limits<double>::quiet_NaN();
  double sd_l2err = std::numeric_limits<double>::quiet_NaN();
  double mean_tpr = std::numeric_limits<double>::quiet_NaN();
  double mean_fpr = std::numeric_limits<double>::quiet_NaN();
  double exact_rate = std::numeric_limits<double>::quiet_NaN();
  double mean_seconds = std::numeric_limits<double>::quiet_NaN();
  int ok_count = 0;
  int fail_count = 0;
};

// Aggregate the successful records (mean/sd with the n-1 divisor; sd = 0 for
// a single record).
MethodAggregate aggregate_records(const std::vector<ReplicateRecord>& records);

struct ScenarioResult {
  ScenarioSpec spec;
  std::vector<ReplicateRecord> records;
  std::vector<std::pair<Method, MethodAggregate>> per_method;
};

using MethodRunner = std::function<ReplicateRecord(const ScenarioSpec&, int, Method)>;

// Run every (scenario, method, replicate) cell and aggregate per method.
// `runner` defaults to run_replicate and exists so orchestration can be
// tested with planted results.
std::vector<ScenarioResult> run_grid(const std::vector<ScenarioSpec>& specs,
                                     const MethodRunner& runner = {});

}  // namespace hdben
