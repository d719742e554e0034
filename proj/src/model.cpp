#include "hdben/model.hpp"

#include <cmath>
#include <limits>

namespace hdben {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

double gamma_logpdf(double x, double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0)) throw ContractViolation("gamma_logpdf needs positive shape and rate");
  if (x < 0.0) throw ContractViolation("gamma_logpdf needs x >= 0");
  if (x == 0.0) {
    if (shape < 1.0) return kInf;
    if (shape == 1.0) return std::log(rate);
    return -kInf;
  }
  return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

double exponential_logpdf(double x, double rate) {
  if (!(rate > 0.0)) throw ContractViolation("exponential_logpdf needs positive rate");
  if (x < 0.0) throw ContractViolation("exponential_logpdf needs x >= 0");
  return std::log(rate) - rate * x;
}

double inverse_gaussian_logpdf(double x, double mu, double lambda) {
  if (!(mu > 0.0) || !(lambda > 0.0)) throw ContractViolation("inverse_gaussian_logpdf needs positive parameters");
  if (!(x > 0.0)) throw ContractViolation("inverse_gaussian_logpdf needs x > 0");
  const double dev = x - mu;
  return 0.5 * (std::log(lambda) - kLog2Pi - 3.0 * std::log(x)) -
         lambda * dev * dev / (2.0 * mu * mu * x);
}

double log_likelihood(const VectorXd& beta, const VectorXd& gamma, const Dataset& data) {
  const Eigen::Index d = data.d();
  if (beta.size() != d || gamma.size() != d)
    throw ContractViolation("log_likelihood coefficient lengths must equal d");

  const VectorXd z =
      (data.x * gamma).cwiseMax(-kLinPredClamp).cwiseMin(kLinPredClamp);
  const VectorXd r = data.y - data.x * beta;
  const double n = static_cast<double>(data.n());
  return -0.5 * n * kLog2Pi - 0.5 * z.sum() -
         0.5 * (r.array().square() * (-z.array()).exp()).sum();
}

namespace {

// ln N(v | 0, (diag(1/tau) + lambda2 I)^-1) summed over coordinates.
double gaussian_block_logpdf(const VectorXd& v, const VectorXd& tau, double lambda2) {
  double lp = 0.0;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const double prec = 1.0 / tau[j] + lambda2;
    lp += 0.5 * (std::log(prec) - kLog2Pi) - 0.5 * prec * v[j] * v[j];
  }
  return lp;
}

}  // namespace

double log_prior(const ChainState& state, const Hyperparameters& hyp) {
  hyp.validate();
  const Eigen::Index d = state.beta.size();
  state.validate(d);

  double lp = gaussian_block_logpdf(state.beta, state.tau_beta, state.lambda2_beta) +
              gaussian_block_logpdf(state.gamma, state.tau_gamma, state.lambda2_gamma);
  for (Eigen::Index j = 0; j < d; ++j) {
    lp += exponential_logpdf(state.tau_beta[j], state.lambda1_beta_sq / 2.0);
    lp += exponential_logpdf(state.tau_gamma[j], state.lambda1_gamma_sq / 2.0);
  }
  lp += gamma_logpdf(state.lambda1_beta_sq, hyp.a_beta1, hyp.b_beta1);
  lp += gamma_logpdf(state.lambda1_gamma_sq, hyp.a_gamma1, hyp.b_gamma1);
  lp += gamma_logpdf(state.lambda2_beta, hyp.a_beta2, hyp.b_beta2);
  lp += gamma_logpdf(state.lambda2_gamma, hyp.a_gamma2, hyp.b_gamma2);
  return lp;
}

double log_posterior_unnorm(const ChainState& state, const Dataset& data,
                            const Hyperparameters& hyp) {
  data.validate();
  if (state.beta.size() != data.d()) throw ContractViolation("state dimension must match data");
  return log_likelihood(state.beta, state.gamma, data) + log_prior(state, hyp);
}

double gaussian_kl(const VectorXd& beta0, const VectorXd& gamma0, const VectorXd& beta,
                   const VectorXd& gamma, const Dataset& data) {
  const Eigen::Index d = data.d();
  if (beta0.size() != d || gamma0.size() != d || beta.size() != d || gamma.size() != d)
    throw ContractViolation("gaussian_kl coefficient lengths must equal d");

  // Per observation: KL(N(m0, e^z0) || N(m, e^z))
  //   = (z - z0 + (e^z0 + (m - m0)^2) e^{-z} - 1) / 2, each term >= 0.
  const VectorXd z0 = (data.x * gamma0).cwiseMax(-kLinPredClamp).cwiseMin(kLinPredClamp);
  const VectorXd z = (data.x * gamma).cwiseMax(-kLinPredClamp).cwiseMin(kLinPredClamp);
  const VectorXd dm = data.x * (beta - beta0);
  double total = 0.0;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const double md = dm[i];
    total += 0.5 * (z[i] - z0[i] + (std::exp(z0[i]) + md * md) * std::exp(-z[i]) - 1.0);
  }
  return total / static_cast<double>(data.n());
}

MatrixXd fisher_information_active(const Dataset& data, const IndexSet& support_beta,
                                   const IndexSet& support_gamma) {
  data.validate();
  const Eigen::Index d = data.d();
  auto check = [&](const IndexSet& s) {
    for (int j : s) {
      if (j < 0 || j >= d) throw ContractViolation("support index out of range");
    }
  };
  check(support_beta);
  check(support_gamma);

  const auto sb = static_cast<Eigen::Index>(support_beta.size());
  const auto sg = static_cast<Eigen::Index>(support_gamma.size());
  const double inv_n = 1.0 / static_cast<double>(data.n());

  auto gram_block = [&](const IndexSet& s) {
    MatrixXd xs(data.n(), static_cast<Eigen::Index>(s.size()));
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(s.size()); ++k)
      xs.col(k) = data.x.col(s[static_cast<size_t>(k)]);
    MatrixXd g = MatrixXd::Zero(xs.cols(), xs.cols());
    g.selfadjointView<Eigen::Lower>().rankUpdate(xs.transpose(), inv_n);
    // Mirror the computed lower triangle so the result is exactly symmetric.
    g.triangularView<Eigen::StrictlyUpper>() = g.transpose();
    return g;
  };

  MatrixXd info = MatrixXd::Zero(sb + sg, sb + sg);
  if (sb > 0) info.topLeftCorner(sb, sb) = gram_block(support_beta);
  if (sg > 0) info.bottomRightCorner(sg, sg) = gram_block(support_gamma);
  return info;
}

}  // namespace hdben
