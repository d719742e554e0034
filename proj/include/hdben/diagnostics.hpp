#pragma once

#include <vector>

#include "hdben/types.hpp"

namespace hdben {

// Type-7 quantile: linear interpolation between order statistics.
double quantile_linear(std::vector<double> values, double p);

// Split-chain potential scale reduction factor over one coordinate. Each
// chain is halved; R = sqrt(((m-1)/m * W + B/m) / W). All-identical draws
// return exactly 1.
double gelman_rubin(const std::vector<VectorXd>& chains);

// N / (1 + 2 * sum of autocorrelations), summed over consecutive pairs
// (rho_1+rho_2), (rho_3+rho_4), ... until the first negative pair, each pair
// capped by its predecessor. Result clamped to (0, N]; zero-variance input
// returns N.
double effective_sample_size(const VectorXd& draws);

// Multi-chain ESS: sum of per-chain estimates.
double effective_sample_size(const std::vector<VectorXd>& chains);

struct SupportRule {
  enum class Kind { credible_interval, magnitude };
  Kind kind = Kind::credible_interval;
  double level = 0.95;      // credible_interval: equal-tailed mass
  double threshold = 0.0;   // magnitude: |median| must exceed this

  void validate() const {
    if (kind == Kind::credible_interval && !(level > 0.5 && level < 1.0))
      throw ContractViolation("credible interval level must lie in (0.5, 1)");
    if (kind == Kind::magnitude && threshold < 0.0)
      throw ContractViolation("magnitude threshold must be nonnegative");
  }
};

// Coordinates whose pooled draws pass the rule. The credible-interval rule
// selects j iff the equal-tailed interval excludes 0 (an endpoint at 0 counts
// as containing it). `pooled` is (total kept draws) x d.
IndexSet select_support(const MatrixXd& pooled, const SupportRule& rule);

// Per-coordinate posterior summaries of one block.
struct BlockSummary {
  VectorXd mean;
  VectorXd sd;
  VectorXd median;
  VectorXd q_lo;   // 2.5%
  VectorXd q_hi;   // 97.5%
  VectorXd rhat;
  VectorXd ess;
};

struct FitSummary {
  BlockSummary beta;
  BlockSummary gamma;
  IndexSet support_beta;
  IndexSet support_gamma;
  double mh_acceptance = 1.0;
};

// Pooled-draw summaries for both blocks plus support selection under `rule`.
// Chains shorter than the ESS estimator's minimum fall back to ess = N; a
// single chain reports rhat = 1.
FitSummary summarize(const PosteriorDraws& draws, const SupportRule& rule = {});

struct SupportMetrics {
  double tpr = 1.0;
  double fpr = 0.0;
  bool exact = true;
};

// selected/truth are sorted index sets over d coordinates. Empty truth gives
// tpr = 1; full truth gives fpr = 0.
SupportMetrics support_metrics(const IndexSet& selected, const IndexSet& truth, int d);

double l2_error(const VectorXd& estimate, const VectorXd& truth);

// Squared-error ratio against the sparse-recovery benchmark
// (s_beta + s_gamma) * ln(d) / n.
double contraction_ratio(double err_sq, long n, long d, int s_beta, int s_gamma);

}  // namespace hdben
