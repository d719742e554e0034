#include "hdben/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hdben {

namespace {

double sample_mean(const VectorXd& v) { return v.mean(); }

// Unbiased sample variance.
double sample_var(const VectorXd& v) {
  const Eigen::Index n = v.size();
  if (n < 2) return 0.0;
  const double m = v.mean();
  return (v.array() - m).square().sum() / static_cast<double>(n - 1);
}

}  // namespace

double quantile_linear(std::vector<double> values, double p) {
  if (values.empty()) throw ContractViolation("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw ContractViolation("quantile level must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  if (n == 1) return values[0];
  const double h = static_cast<double>(n - 1) * p;
  const auto lo = static_cast<size_t>(h);
  if (lo + 1 >= n) return values[n - 1];
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

double gelman_rubin(const std::vector<VectorXd>& chains) {
  if (chains.size() < 2) throw ContractViolation("gelman_rubin needs at least 2 chains");
  for (const auto& c : chains) {
    if (c.size() < 4) throw ContractViolation("gelman_rubin needs at least 4 draws per chain");
  }

  // Each chain contributes its first and second halves as separate sequences.
  std::vector<VectorXd> halves;
  halves.reserve(2 * chains.size());
  Eigen::Index m = std::numeric_limits<Eigen::Index>::max();
  for (const auto& c : chains) m = std::min(m, c.size() / 2);
  for (const auto& c : chains) {
    halves.push_back(c.head(m));
    halves.push_back(c.tail(m));
  }

  const auto k = static_cast<double>(halves.size());
  double w = 0.0;
  VectorXd means(static_cast<Eigen::Index>(halves.size()));
  for (size_t i = 0; i < halves.size(); ++i) {
    w += sample_var(halves[i]);
    means[static_cast<Eigen::Index>(i)] = sample_mean(halves[i]);
  }
  w /= k;
  const double b = static_cast<double>(m) * sample_var(means);

  if (w <= 0.0) {
    return b <= 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  }
  const double md = static_cast<double>(m);
  const double var_plus = (md - 1.0) / md * w + b / md;
  return std::sqrt(var_plus / w);
}

double effective_sample_size(const VectorXd& draws) {
  const Eigen::Index n = draws.size();
  if (n < 10) throw ContractViolation("effective_sample_size needs at least 10 draws");

  const double mean = draws.mean();
  const VectorXd centered = draws.array() - mean;
  const double c0 = centered.squaredNorm() / static_cast<double>(n);
  if (!(c0 > 0.0) || !std::isfinite(c0)) return static_cast<double>(n);

  auto rho = [&](Eigen::Index t) {
    double s = 0.0;
    for (Eigen::Index i = 0; i + t < n; ++i) s += centered[i] * centered[i + t];
    return s / (static_cast<double>(n) * c0);
  };

  // Sum lag pairs (rho_1 + rho_2), (rho_3 + rho_4), ... until the first
  // negative pair; enforce monotone decrease to damp late-lag noise.
  double sum_pairs = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  for (Eigen::Index t = 1; t + 1 < n; t += 2) {
    double pair = rho(t) + rho(t + 1);
    if (pair < 0.0) break;
    pair = std::min(pair, prev);
    prev = pair;
    sum_pairs += pair;
  }

  const double tau = 1.0 + 2.0 * sum_pairs;
  const double ess = static_cast<double>(n) / tau;
  return std::min(std::max(ess, std::numeric_limits<double>::min()), static_cast<double>(n));
}

double effective_sample_size(const std::vector<VectorXd>& chains) {
  if (chains.empty()) throw ContractViolation("effective_sample_size needs at least one chain");
  double total = 0.0;
  for (const auto& c : chains) total += effective_sample_size(c);
  return total;
}

IndexSet select_support(const MatrixXd& pooled, const SupportRule& rule) {
  rule.validate();
  if (pooled.rows() < 1) throw ContractViolation("select_support needs at least one draw");

  IndexSet out;
  for (Eigen::Index j = 0; j < pooled.cols(); ++j) {
    std::vector<double> col(pooled.col(j).data(), pooled.col(j).data() + pooled.rows());
    if (rule.kind == SupportRule::Kind::credible_interval) {
      const double tail = (1.0 - rule.level) / 2.0;
      const double lo = quantile_linear(col, tail);
      const double hi = quantile_linear(std::move(col), 1.0 - tail);
      if (lo > 0.0 || hi < 0.0) out.push_back(static_cast<int>(j));
    } else {
      const double med = quantile_linear(std::move(col), 0.5);
      if (std::abs(med) > rule.threshold) out.push_back(static_cast<int>(j));
    }
  }
  return out;
}

namespace {

MatrixXd pool_block(const PosteriorDraws& draws, const MatrixXd ChainDraws::*block) {
  const Eigen::Index kept = draws.kept_per_chain();
  const Eigen::Index d = (draws.chains.front().*block).cols();
  MatrixXd pooled(kept * draws.num_chains(), d);
  Eigen::Index row = 0;
  for (const auto& c : draws.chains) {
    pooled.middleRows(row, kept) = c.*block;
    row += kept;
  }
  return pooled;
}

BlockSummary summarize_block(const PosteriorDraws& draws, const MatrixXd& pooled,
                             const MatrixXd ChainDraws::*block) {
  const Eigen::Index d = pooled.cols();
  const Eigen::Index kept = draws.kept_per_chain();
  BlockSummary s;
  s.mean.resize(d);
  s.sd.resize(d);
  s.median.resize(d);
  s.q_lo.resize(d);
  s.q_hi.resize(d);
  s.rhat.resize(d);
  s.ess.resize(d);

  for (Eigen::Index j = 0; j < d; ++j) {
    std::vector<double> col(pooled.col(j).data(), pooled.col(j).data() + pooled.rows());
    s.mean[j] = pooled.col(j).mean();
    s.sd[j] = std::sqrt(sample_var(pooled.col(j)));
    s.median[j] = quantile_linear(col, 0.5);
    s.q_lo[j] = quantile_linear(col, 0.025);
    s.q_hi[j] = quantile_linear(std::move(col), 0.975);

    std::vector<VectorXd> per_chain;
    per_chain.reserve(draws.chains.size());
    for (const auto& c : draws.chains) per_chain.push_back((c.*block).col(j));
    s.rhat[j] = draws.num_chains() >= 2 ? gelman_rubin(per_chain) : 1.0;
    if (kept >= 10) {
      s.ess[j] = effective_sample_size(per_chain);
    } else {
      // Too short for the autocorrelation estimator; report nominal size.
      s.ess[j] = static_cast<double>(kept * draws.num_chains());
    }
  }
  return s;
}

}  // namespace

FitSummary summarize(const PosteriorDraws& draws, const SupportRule& rule) {
  rule.validate();
  if (draws.chains.empty()) throw ContractViolation("summarize needs at least one chain");
  const Eigen::Index kept = draws.kept_per_chain();
  if (kept < 4) throw ContractViolation("summarize needs at least 4 kept draws per chain");
  for (const auto& c : draws.chains) {
    if (c.beta.rows() != kept || c.gamma.rows() != kept)
      throw ContractViolation("summarize needs equal kept draws across chains");
  }

  FitSummary out;
  const MatrixXd pooled_beta = pool_block(draws, &ChainDraws::beta);
  out.beta = summarize_block(draws, pooled_beta, &ChainDraws::beta);
  out.support_beta = select_support(pooled_beta, rule);

  if (draws.chains.front().gamma.cols() > 0) {
    const MatrixXd pooled_gamma = pool_block(draws, &ChainDraws::gamma);
    out.gamma = summarize_block(draws, pooled_gamma, &ChainDraws::gamma);
    out.support_gamma = select_support(pooled_gamma, rule);
  }

  long proposed = 0;
  long accepted = 0;
  for (const auto& c : draws.chains) {
    proposed += c.mh_proposed;
    accepted += c.mh_accepted;
  }
  out.mh_acceptance =
      proposed > 0 ? static_cast<double>(accepted) / static_cast<double>(proposed) : 1.0;
  return out;
}

SupportMetrics support_metrics(const IndexSet& selected, const IndexSet& truth, int d) {
  if (d < 0) throw ContractViolation("support_metrics needs d >= 0");
  auto check_sorted = [&](const IndexSet& s) {
    for (size_t i = 0; i < s.size(); ++i) {
      if (s[i] < 0 || s[i] >= d) throw ContractViolation("support index out of range");
      if (i > 0 && s[i] <= s[i - 1]) throw ContractViolation("support sets must be sorted and unique");
    }
  };
  check_sorted(selected);
  check_sorted(truth);

  IndexSet hits;
  std::set_intersection(selected.begin(), selected.end(), truth.begin(), truth.end(),
                        std::back_inserter(hits));
  SupportMetrics m;
  m.tpr = truth.empty() ? 1.0
                        : static_cast<double>(hits.size()) / static_cast<double>(truth.size());
  const auto negatives = static_cast<double>(d) - static_cast<double>(truth.size());
  m.fpr = negatives <= 0.0
              ? 0.0
              : static_cast<double>(selected.size() - hits.size()) / negatives;
  m.exact = selected == truth;
  return m;
}

double l2_error(const VectorXd& estimate, const VectorXd& truth) {
  if (estimate.size() != truth.size()) throw ContractViolation("l2_error needs equal lengths");
  return (estimate - truth).norm();
}

double contraction_ratio(double err_sq, long n, long d, int s_beta, int s_gamma) {
  if (!(err_sq >= 0.0)) throw ContractViolation("contraction_ratio needs err_sq >= 0");
  if (n < 1) throw ContractViolation("contraction_ratio needs n >= 1");
  if (d < 2) throw ContractViolation("contraction_ratio needs d >= 2");
  if (s_beta < 0 || s_gamma < 0 || s_beta + s_gamma < 1)
    throw ContractViolation("contraction_ratio needs s_beta + s_gamma >= 1");
  const double benchmark =
      static_cast<double>(s_beta + s_gamma) * std::log(static_cast<double>(d)) /
      static_cast<double>(n);
  return err_sq / benchmark;
}

}  // namespace hdben
