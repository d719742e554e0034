#pragma once

#include <cstdint>
#include <vector>

#include "hdben/rng.hpp"
#include "hdben/types.hpp"

namespace hdben {

// Minimum-norm ordinary least squares.
VectorXd fit_ols(const Dataset& data);

struct EnetConfig {
  double l1_weight = 0.0;
  double l2_weight = 0.0;
  int max_iter = 10000;
  double tol = 1e-7;
  int cv_folds = 5;
  int lambda_grid_size = 20;
  std::uint64_t seed = 42;

  void validate() const {
    if (l1_weight < 0.0 || l2_weight < 0.0) throw ContractViolation("penalty weights must be nonnegative");
    if (max_iter < 1) throw ContractViolation("max_iter must be >= 1");
    if (!(tol > 0.0)) throw ContractViolation("tol must be positive");
    if (cv_folds < 2) throw ContractViolation("cv_folds must be >= 2");
    if (lambda_grid_size < 2) throw ContractViolation("lambda_grid_size must be >= 2");
  }
};

struct EnetResult {
  VectorXd beta;
  bool converged = false;
  int sweeps = 0;
  // Objective value after every completed sweep; non-increasing.
  std::vector<double> objective_trace;
};

// Coordinate descent on
//   (1/2n) ||y - X beta||^2 + l1 ||beta||_1 + l2 ||beta||^2.
// Stops when the largest coordinate change in a sweep drops below tol.
EnetResult fit_enet(const Dataset& data, const EnetConfig& cfg);

enum class EnetKind { lasso, elastic_net };

// K-fold cross-validation over a geometric grid of lambda_grid_size values
// spanning [1e-3, 1] * max|(1/n) X'y|. The quadratic weight is tied to the
// selected l1 weight: 0 for lasso, l1/2 for the elastic net. Fold assignment
// is a seeded permutation, so selection is deterministic in (data, cfg).
EnetConfig cv_select_enet(const Dataset& data, const EnetConfig& cfg, EnetKind kind);

struct HomoBayesConfig {
  int iterations = 2500;
  int burn_in = 500;
  int thinning = 1;
  int chains = 2;
  std::uint64_t seed = 42;
  double sigma2_shape = 1.0;
  double sigma2_rate = 1.0;

  int kept_per_chain() const { return (iterations - burn_in) / thinning; }

  void validate() const {
    if (iterations < 1) throw ContractViolation("iterations must be >= 1");
    if (burn_in < 0 || burn_in >= iterations) throw ContractViolation("burn_in must satisfy 0 <= burn_in < iterations");
    if (thinning < 1) throw ContractViolation("thinning must be >= 1");
    if ((iterations - burn_in) % thinning != 0) throw ContractViolation("iterations - burn_in must be divisible by thinning");
    if (chains < 1) throw ContractViolation("chains must be >= 1");
    if (!(sigma2_shape > 0.0) || !(sigma2_rate > 0.0)) throw ContractViolation("sigma2 prior parameters must be positive");
  }
};

// Homoscedastic Bayesian lasso: y ~ N(X beta, sigma2 I), beta_j | tau_j ~
// N(0, tau_j), tau_j ~ Exp(lambda1^2 / 2), sigma2 inverse-gamma. Gibbs over
// (beta, tau, lambda1^2, sigma2). `scalars` columns: [sigma2, lambda1_sq, 0].
PosteriorDraws fit_blasso(const Dataset& data, const Hyperparameters& hyp,
                          const HomoBayesConfig& cfg);

// Homoscedastic Bayesian elastic net: adds the lambda2 quadratic precision and
// its Gamma update. `scalars` columns: [sigma2, lambda1_sq, lambda2].
PosteriorDraws fit_ben(const Dataset& data, const Hyperparameters& hyp,
                       const HomoBayesConfig& cfg);

}  // namespace hdben
