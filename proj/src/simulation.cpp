#include "hdben/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>

namespace hdben {

std::string to_string(Method m) {
  switch (m) {
    case Method::ols: return "ols";
    case Method::lasso: return "lasso";
    case Method::enet: return "enet";
    case Method::blasso: return "blasso";
    case Method::ben: return "ben";
    case Method::hdben: return "hdben";
  }
  throw ContractViolation("unknown method");
}

std::optional<Method> parse_method(const std::string& name) {
  for (Method m : all_methods()) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

namespace {

// Fixed stream tags keep dataset randomness and estimator randomness on
// non-overlapping streams of the same base seed.
constexpr std::uint64_t kDatasetStream = 0xDA7Au;
constexpr std::uint64_t kFitStream = 0xF17u;

// First s entries of a seeded Fisher-Yates pass, sorted.
IndexSet choose_subset(int d, int s, RngStream& rng) {
  std::vector<int> idx(static_cast<size_t>(d));
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < s; ++i) {
    const int j = i + static_cast<int>(rng.uniform() * static_cast<double>(d - i));
    std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
  }
  IndexSet out(idx.begin(), idx.begin() + s);
  std::sort(out.begin(), out.end());
  return out;
}

VectorXd sparse_uniform(int d, const IndexSet& support, const std::array<double, 2>& range,
                        RngStream& rng) {
  VectorXd v = VectorXd::Zero(d);
  for (int j : support) v[j] = range[0] + (range[1] - range[0]) * rng.uniform();
  return v;
}

std::uint64_t method_fit_seed(const ScenarioSpec& spec, int replicate_index, Method m) {
  const auto id = static_cast<std::uint64_t>(m);
  return derive_seed(derive_seed(derive_seed(spec.seed, kFitStream),
                                 static_cast<std::uint64_t>(replicate_index)),
                     id + 1u);
}

}  // namespace

Dataset generate_dataset(const ScenarioSpec& spec, int replicate_index) {
  spec.validate();
  if (replicate_index < 0) throw ContractViolation("replicate_index must be nonnegative");

  RngStream rng(derive_seed(derive_seed(spec.seed, kDatasetStream),
                            static_cast<std::uint64_t>(replicate_index)));
  Dataset data;
  data.x.resize(spec.n, spec.d);
  for (Eigen::Index i = 0; i < spec.n; ++i) {
    for (Eigen::Index j = 0; j < spec.d; ++j) data.x(i, j) = rng.normal();
  }

  const IndexSet sb = choose_subset(spec.d, spec.s_beta, rng);
  const VectorXd beta0 = sparse_uniform(spec.d, sb, spec.beta_range, rng);
  const IndexSet sg = choose_subset(spec.d, spec.s_gamma, rng);
  const VectorXd gamma0 = sparse_uniform(spec.d, sg, spec.gamma_range, rng);

  data.y.resize(spec.n);
  for (Eigen::Index i = 0; i < spec.n; ++i) {
    const double mean = data.x.row(i).dot(beta0);
    const double log_var = data.x.row(i).dot(gamma0);
    data.y[i] = mean + std::exp(0.5 * log_var) * rng.normal();
  }
  data.truth = make_ground_truth(beta0, gamma0);
  return data;
}

ReplicateRecord run_replicate(const ScenarioSpec& spec, int replicate_index, Method method) {
  ReplicateRecord rec;
  rec.method = method;
  rec.replicate = replicate_index;

  Dataset data = generate_dataset(spec, replicate_index);
  const GroundTruth& truth = *data.truth;
  const std::uint64_t fit_seed = method_fit_seed(spec, replicate_index, method);

  const auto t0 = std::chrono::steady_clock::now();
  try {
    switch (method) {
      case Method::ols: {
        rec.beta_hat = fit_ols(data);
        break;
      }
      case Method::lasso:
      case Method::enet: {
        EnetConfig cfg = spec.enet;
        cfg.seed = fit_seed;
        const EnetKind kind = method == Method::lasso ? EnetKind::lasso : EnetKind::elastic_net;
        cfg = cv_select_enet(data, cfg, kind);
        rec.beta_hat = fit_enet(data, cfg).beta;
        break;
      }
      case Method::blasso:
      case Method::ben: {
        HomoBayesConfig cfg = spec.homo;
        cfg.seed = fit_seed;
        PosteriorDraws draws = method == Method::blasso ? fit_blasso(data, spec.hyp, cfg)
                                                        : fit_ben(data, spec.hyp, cfg);
        FitSummary summary = summarize(draws);
        rec.beta_hat = summary.beta.mean;
        rec.beta_support = support_metrics(summary.support_beta, truth.support_beta, spec.d);
        rec.max_rhat_beta = summary.beta.rhat.maxCoeff();
        rec.min_ess_beta = summary.beta.ess.minCoeff();
        break;
      }
      case Method::hdben: {
        SamplerConfig cfg = spec.sampler;
        cfg.seed = fit_seed;
        PosteriorDraws draws = fit_hdben(data, spec.hyp, cfg);
        FitSummary summary = summarize(draws);
        rec.beta_hat = summary.beta.mean;
        rec.gamma_hat = summary.gamma.mean;
        rec.beta_support = support_metrics(summary.support_beta, truth.support_beta, spec.d);
        rec.gamma_support = support_metrics(summary.support_gamma, truth.support_gamma, spec.d);
        rec.max_rhat_beta = summary.beta.rhat.maxCoeff();
        rec.min_ess_beta = summary.beta.ess.minCoeff();
        rec.mh_acceptance = summary.mh_acceptance;
        break;
      }
    }
  } catch (const std::exception& e) {
    rec.failed = true;
    rec.error = e.what();
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
  }
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  rec.l2err = l2_error(rec.beta_hat, truth.beta0);
  if (method == Method::ols || method == Method::lasso || method == Method::enet) {
    rec.beta_support = support_metrics(nonzero_support(rec.beta_hat), truth.support_beta, spec.d);
  }
  return rec;
}

MethodAggregate aggregate_records(const std::vector<ReplicateRecord>& records) {
  MethodAggregate agg;
  std::vector<const ReplicateRecord*> ok;
  for (const auto& r : records) {
    if (r.failed) {
      ++agg.fail_count;
    } else {
      ok.push_back(&r);
    }
  }
  agg.ok_count = static_cast<int>(ok.size());
  if (ok.empty()) return agg;

  const double k = static_cast<double>(ok.size());
  double mean = 0.0, tpr = 0.0, fpr = 0.0, exact = 0.0, secs = 0.0;
  for (const auto* r : ok) {
    mean += r->l2err;
    tpr += r->beta_support.tpr;
    fpr += r->beta_support.fpr;
    exact += r->beta_support.exact ? 1.0 : 0.0;
    secs += r->seconds;
  }
  mean /= k;
  double ss = 0.0;
  for (const auto* r : ok) ss += (r->l2err - mean) * (r->l2err - mean);
  agg.mean_l2err = mean;
  agg.sd_l2err = ok.size() > 1 ? std::sqrt(ss / (k - 1.0)) : 0.0;
  agg.mean_tpr = tpr / k;
  agg.mean_fpr = fpr / k;
  agg.exact_rate = exact / k;
  agg.mean_seconds = secs / k;
  return agg;
}

std::vector<ScenarioResult> run_grid(const std::vector<ScenarioSpec>& specs,
                                     const MethodRunner& runner) {
  const MethodRunner& run = runner ? runner : MethodRunner(run_replicate);

  std::vector<ScenarioResult> results;
  results.reserve(specs.size());
  for (const auto& spec : specs) {
    spec.validate();
    ScenarioResult res;
    res.spec = spec;
    for (Method m : spec.methods) {
      std::vector<ReplicateRecord> of_method;
      of_method.reserve(static_cast<size_t>(spec.replicates));
      for (int rep = 0; rep < spec.replicates; ++rep) {
        ReplicateRecord rec;
        try {
          rec = run(spec, rep, m);
        } catch (const std::exception& e) {
          rec.method = m;
          rec.replicate = rep;
          rec.failed = true;
          rec.error = e.what();
        }
        of_method.push_back(rec);
      }
      res.per_method.emplace_back(m, aggregate_records(of_method));
      for (auto& r : of_method) res.records.push_back(std::move(r));
    }
    results.push_back(std::move(res));
  }
  return results;
}

}  // namespace hdben
