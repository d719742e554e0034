#pragma once

#include <cstdint>
#include <utility>

#include "hdben/rng.hpp"
#include "hdben/types.hpp"

namespace hdben {

// `paper` draws tau_j directly from the inverse-Gaussian; `reciprocal` draws
// u ~ IG and sets tau_j = 1/u, the exact conjugate form at lambda2 = 0.
enum class TauUpdateMode { paper, reciprocal };

// Gamma scans composed into each Gibbs sweep by run_chain. Every other block
// is drawn exactly, so the walk on gamma sets the chain's autocorrelation;
// three scans keep its effective sample size comparable to the exact blocks.
inline constexpr int kGammaScansPerSweep = 3;

struct SamplerConfig {
  int iterations = 2500;
  int burn_in = 500;
  int thinning = 1;
  int chains = 2;
  std::uint64_t seed = 42;
  double mh_step_init = 0.1;
  bool adapt_enabled = true;
  int adapt_window = 25;
  double adapt_target = 0.3;
  TauUpdateMode tau_update_mode = TauUpdateMode::paper;
  double beta_floor = 1e-10;

  int kept_per_chain() const { return (iterations - burn_in) / thinning; }

  void validate() const {
    if (iterations < 1) throw ContractViolation("iterations must be >= 1");
    if (burn_in < 0 || burn_in >= iterations) throw ContractViolation("burn_in must satisfy 0 <= burn_in < iterations");
    if (thinning < 1) throw ContractViolation("thinning must be >= 1");
    if ((iterations - burn_in) % thinning != 0) throw ContractViolation("iterations - burn_in must be divisible by thinning");
    if (chains < 1) throw ContractViolation("chains must be >= 1");
    if (!(mh_step_init > 0.0)) throw ContractViolation("mh_step_init must be positive");
    if (adapt_window < 1) throw ContractViolation("adapt_window must be >= 1");
    if (!(adapt_target >= 0.1 && adapt_target <= 0.6)) throw ContractViolation("adapt_target must lie in [0.1, 0.6]");
    if (!(beta_floor > 0.0)) throw ContractViolation("beta_floor must be positive");
  }
};

// Running Metropolis bookkeeping for one chain.
struct MhStats {
  long proposed = 0;
  long accepted = 0;
  double current_step = 0.1;
  long window_proposed = 0;
  long window_accepted = 0;
};

// Step-size adaptation switch; enabled only during burn-in.
struct MhAdaptPolicy {
  bool enabled = false;
  int window = 25;
  double target = 0.3;
};

// Accept iff log_ratio >= 0 or u < exp(log_ratio). Consumes one uniform only
// when the ratio is negative.
bool mh_accept(double log_ratio, RngStream& rng);

// Draw beta from its Gaussian full conditional
//   N(Sigma* X'W y, Sigma*),  Sigma* = (X'WX + D^-1 + lambda2 I)^-1,
// with W = diag(exp(-z_i)) from the clamped log-variance predictors. Uses a
// d-dimensional Cholesky when d <= 4n and an n-dimensional identity otherwise.
VectorXd update_beta(const ChainState& state, const Dataset& data, RngStream& rng);

// Shared kernel: draw from N(A^-1 Xw' yw, A^-1) with A = Xw'Xw + diag(prior_prec).
VectorXd draw_conditional_coefficients(const MatrixXd& xw, const VectorXd& yw,
                                       const VectorXd& prior_prec, RngStream& rng);

// One Metropolis-within-Gibbs scan over gamma targeting its full conditional:
// each coordinate in turn gets a random-walk proposal gamma_j + step * N(0,1)
// accepted on the usual log-ratio, with the likelihood delta evaluated
// incrementally in O(n). Returns the new value and whether any coordinate
// moved. Stats count per-coordinate proposals; when the policy is enabled the
// shared step is rescaled by exp(rate - target) once every `window` full scans.
std::pair<VectorXd, bool> update_gamma_mh(const ChainState& state, const Dataset& data,
                                          MhStats& stats, RngStream& rng,
                                          const MhAdaptPolicy& policy = {});

// Per-coordinate latent scale update. mu_j = sqrt(lambda1_sq / max(c_j^2,
// floor^2)); paper mode returns the IG(mu_j, lambda1_sq) draw itself,
// reciprocal mode its inverse.
VectorXd update_tau_vector(const VectorXd& coefs, double lambda1_sq, TauUpdateMode mode,
                           double floor, RngStream& rng);

// lambda1^2 | tau ~ Gamma(a + d, b + sum(tau)/2).
double update_lambda1_sq(const VectorXd& tau, double a, double b, RngStream& rng);

// lambda2 | coefs ~ Gamma(a + d/2, b + ||coefs||^2 / 2).
double update_lambda2(const VectorXd& coefs, double a, double b, RngStream& rng);

// Initial state: beta from a minimum-norm least-squares fit, gamma = 0,
// tau = 1, all penalties 1.
ChainState initial_state(const Dataset& data);

// One full Gibbs chain. Sweep order per iteration: beta, gamma (MH), tau_beta,
// tau_gamma, lambda1_beta_sq, lambda1_gamma_sq, lambda2_beta, lambda2_gamma.
// The chain's stream derives from (cfg.seed, chain_index).
ChainDraws run_chain(const Dataset& data, const Hyperparameters& hyp, const SamplerConfig& cfg,
                     int chain_index);

// All chains, sequentially; any chain failure aggregates into ChainFailure.
PosteriorDraws fit_hdben(const Dataset& data, const Hyperparameters& hyp,
                         const SamplerConfig& cfg);

}  // namespace hdben
