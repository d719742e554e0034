#pragma once

// Shared helpers for the test binaries: elementary statistics, independent
// distribution functions used as oracles, chi-square machinery, and the
// joint-distribution consistency harness for the Gibbs kernel.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "hdben/model.hpp"
#include "hdben/rng.hpp"
#include "hdben/samplers.hpp"
#include "hdben/types.hpp"

namespace testsup {

inline double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double var_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return acc / static_cast<double>(v.size() - 1);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Regularized lower incomplete gamma P(a, x) by series (x < a+1) or
// continued fraction, the classic two-branch evaluation.
inline double regularized_gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - gln);
  }
  double b = x + 1.0 - a;
  double c = 1e300;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::fabs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return 1.0 - std::exp(-x + a * std::log(x) - gln) * h;
}

// CDF of Gamma(shape, rate).
inline double gamma_cdf(double x, double shape, double rate) {
  return regularized_gamma_p(shape, rate * x);
}

// Closed-form inverse-Gaussian CDF.
inline double inverse_gaussian_cdf(double x, double mu, double lam) {
  if (x <= 0.0) return 0.0;
  const double s = std::sqrt(lam / x);
  return normal_cdf(s * (x / mu - 1.0)) +
         std::exp(2.0 * lam / mu) * normal_cdf(-s * (x / mu + 1.0));
}

// Upper critical value of chi-square with df degrees of freedom at the
// one-sided level implied by the standard-normal quantile z, via the
// Wilson-Hilferty cube approximation.
inline double chi2_upper_crit(double df, double z) {
  const double t = 1.0 - 2.0 / (9.0 * df) + z * std::sqrt(2.0 / (9.0 * df));
  return df * t * t * t;
}

// Pearson statistic of observed counts against expected cell masses.
inline double chi2_statistic(const std::vector<long>& counts, const std::vector<double>& masses,
                             double total) {
  double stat = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double e = masses[i] * total;
    const double diff = static_cast<double>(counts[i]) - e;
    stat += diff * diff / e;
  }
  return stat;
}

// Bins [edges[k], edges[k+1]) plus the two open tails.
inline std::vector<long> bin_draws(const std::vector<double>& draws,
                                   const std::vector<double>& edges) {
  std::vector<long> counts(edges.size() + 1, 0);
  for (double x : draws) {
    std::size_t k = 0;
    while (k < edges.size() && x >= edges[k]) ++k;
    ++counts[k];
  }
  return counts;
}

// Cell masses matching bin_draws from a CDF callable.
template <typename Cdf>
std::vector<double> cell_masses(const std::vector<double>& edges, Cdf cdf) {
  std::vector<double> masses;
  double prev = 0.0;
  for (double e : edges) {
    const double c = cdf(e);
    masses.push_back(c - prev);
    prev = c;
  }
  masses.push_back(1.0 - prev);
  return masses;
}

// Batch-means standard error of the mean for a correlated scalar sequence.
inline double batch_means_se(const std::vector<double>& v) {
  const std::size_t n = v.size();
  const std::size_t len = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  const std::size_t nb = n / len;
  std::vector<double> means;
  means.reserve(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    double acc = 0.0;
    for (std::size_t i = b * len; i < (b + 1) * len; ++i) acc += v[i];
    means.push_back(acc / static_cast<double>(len));
  }
  return std::sqrt(var_of(means) / static_cast<double>(nb));
}

// Joint-distribution consistency harness for the Gibbs kernel on a 4x1
// problem with both quadratic penalties frozen at zero and reciprocal latent
// scales (the regime in which every conditional is exact). Two estimates of
// the prior expectation of each bounded statistic are compared: direct prior
// simulation vs. alternating (kernel sweep, data redraw).
struct ConsistencyOutcome {
  std::vector<std::string> names;
  std::vector<double> z_scores;  // one per statistic
};

namespace detail {

inline hdben::ChainState prior_draw_state(hdben::RngStream& rng) {
  hdben::ChainState st;
  st.lambda1_beta_sq = hdben::sample_gamma_variate(2.0, 1.0, rng);
  st.lambda1_gamma_sq = hdben::sample_gamma_variate(2.0, 1.0, rng);
  st.lambda2_beta = 0.0;
  st.lambda2_gamma = 0.0;
  st.tau_beta = hdben::VectorXd::Constant(1, rng.exponential(st.lambda1_beta_sq / 2.0));
  st.tau_gamma = hdben::VectorXd::Constant(1, rng.exponential(st.lambda1_gamma_sq / 2.0));
  st.beta = hdben::VectorXd::Constant(1, rng.normal(0.0, std::sqrt(st.tau_beta[0])));
  st.gamma = hdben::VectorXd::Constant(1, rng.normal(0.0, std::sqrt(st.tau_gamma[0])));
  return st;
}

inline std::vector<double> bounded_stats(const hdben::ChainState& st) {
  return {st.beta[0],
          st.gamma[0],
          1.0 / (1.0 + st.tau_beta[0]),
          1.0 / (1.0 + st.tau_gamma[0]),
          std::exp(-st.lambda1_beta_sq),
          std::exp(-st.lambda1_gamma_sq)};
}

}  // namespace detail

inline ConsistencyOutcome run_joint_consistency(std::size_t scans, std::uint64_t seed) {
  using namespace hdben;
  const int kStats = 6;
  Dataset data;
  data.x.resize(4, 1);
  data.x << 0.3, -0.2, 0.5, -0.4;
  data.y.resize(4);

  // Side 1: direct prior simulation, independent draws.
  RngStream rng1(derive_seed(seed, 1));
  std::vector<std::vector<double>> side1(kStats);
  for (std::size_t t = 0; t < scans; ++t) {
    const ChainState st = detail::prior_draw_state(rng1);
    const auto g = detail::bounded_stats(st);
    for (int k = 0; k < kStats; ++k) side1[static_cast<std::size_t>(k)].push_back(g[static_cast<std::size_t>(k)]);
  }

  // Side 2: alternate one kernel sweep with a likelihood redraw of y.
  RngStream rng2(derive_seed(seed, 2));
  ChainState st = detail::prior_draw_state(rng2);
  auto redraw_y = [&](const ChainState& s) {
    for (Eigen::Index i = 0; i < 4; ++i) {
      const double z = clamp_linpred(data.x(i, 0) * s.gamma[0]);
      data.y[i] = data.x(i, 0) * s.beta[0] + std::exp(z / 2.0) * rng2.normal();
    }
  };
  redraw_y(st);
  MhStats mh;
  mh.current_step = 0.8;
  const MhAdaptPolicy no_adapt{false, 25, 0.3};
  std::vector<std::vector<double>> side2(kStats);
  const std::size_t warm = 100;
  for (std::size_t t = 0; t < scans + warm; ++t) {
    st.beta = update_beta(st, data, rng2);
    st.gamma = update_gamma_mh(st, data, mh, rng2, no_adapt).first;
    st.tau_beta = update_tau_vector(st.beta, st.lambda1_beta_sq, TauUpdateMode::reciprocal,
                                    1e-10, rng2);
    st.tau_gamma = update_tau_vector(st.gamma, st.lambda1_gamma_sq, TauUpdateMode::reciprocal,
                                     1e-10, rng2);
    st.lambda1_beta_sq = update_lambda1_sq(st.tau_beta, 2.0, 1.0, rng2);
    st.lambda1_gamma_sq = update_lambda1_sq(st.tau_gamma, 2.0, 1.0, rng2);
    redraw_y(st);
    if (t >= warm) {
      const auto g = detail::bounded_stats(st);
      for (int k = 0; k < kStats; ++k) side2[static_cast<std::size_t>(k)].push_back(g[static_cast<std::size_t>(k)]);
    }
  }

  ConsistencyOutcome out;
  out.names = {"beta", "gamma", "tau_beta_recip", "tau_gamma_recip", "l1b_exp", "l1g_exp"};
  for (int k = 0; k < kStats; ++k) {
    const auto& a = side1[static_cast<std::size_t>(k)];
    const auto& b = side2[static_cast<std::size_t>(k)];
    const double se1 = std::sqrt(var_of(a) / static_cast<double>(a.size()));
    const double se2 = batch_means_se(b);
    out.z_scores.push_back((mean_of(a) - mean_of(b)) / std::sqrt(se1 * se1 + se2 * se2));
  }
  return out;
}

}  // namespace testsup
