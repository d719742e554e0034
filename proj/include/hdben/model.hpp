#pragma once

#include "hdben/types.hpp"

namespace hdben {

// Linear predictors of the log-variance are clamped to this band before
// exponentiation so that weights and densities stay finite.
inline constexpr double kLinPredClamp = 30.0;

inline double clamp_linpred(double z) {
  if (z < -kLinPredClamp) return -kLinPredClamp;
  if (z > kLinPredClamp) return kLinPredClamp;
  return z;
}

// Elementary log-densities shared by the prior, the samplers, and the tests.
// gamma_logpdf takes the limit convention at x = 0: +inf for shape < 1,
// ln(rate) for shape = 1, -inf for shape > 1.
double gamma_logpdf(double x, double shape, double rate);
double exponential_logpdf(double x, double rate);
double inverse_gaussian_logpdf(double x, double mu, double lambda);

// Sum over observations of ln N(y_i | x_i'beta, exp(z_i)), z_i the clamped
// log-variance predictor.
double log_likelihood(const VectorXd& beta, const VectorXd& gamma, const Dataset& data);

// Joint log-density of all blocks under the hierarchical prior: conditional
// normals for beta and gamma (precision 1/tau_j + lambda2), exponentials for
// the tau vectors, and the four Gamma hyperpriors.
double log_prior(const ChainState& state, const Hyperparameters& hyp);

double log_posterior_unnorm(const ChainState& state, const Dataset& data,
                            const Hyperparameters& hyp);

// Average per-observation KL divergence from the generating Gaussian
// (beta0, gamma0) to the candidate (beta, gamma), both with clamped
// log-variances. Nonnegative; zero iff the two pairs give identical fits.
double gaussian_kl(const VectorXd& beta0, const VectorXd& gamma0, const VectorXd& beta,
                   const VectorXd& gamma, const Dataset& data);

// Block-diagonal information matrix of the active coordinates:
// diag((1/n) Xs' Xs over support_beta, (1/n) Xs' Xs over support_gamma).
MatrixXd fisher_information_active(const Dataset& data, const IndexSet& support_beta,
                                   const IndexSet& support_gamma);

}  // namespace hdben
