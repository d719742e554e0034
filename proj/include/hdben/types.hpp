#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hdben {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Sorted, zero-based coordinate indices.
using IndexSet = std::vector<int>;

// Raised when an argument violates an operation's stated domain.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a Cholesky factorization fails; carries the smallest diagonal
// pivot seen so callers can report how close to singular the matrix was.
class SingularityError : public std::runtime_error {
 public:
  SingularityError(const std::string& context, double smallest_pivot)
      : std::runtime_error(context + ": matrix not positive definite (smallest pivot " +
                           std::to_string(smallest_pivot) + ")"),
        smallest_pivot_(smallest_pivot) {}

  double smallest_pivot() const { return smallest_pivot_; }

 private:
  double smallest_pivot_;
};

// Raised when one or more MCMC chains abort; lists the failed chain indices.
class ChainFailure : public std::runtime_error {
 public:
  ChainFailure(std::vector<int> failed_chains, const std::string& detail)
      : std::runtime_error(format(failed_chains, detail)),
        failed_chains_(std::move(failed_chains)) {}

  const std::vector<int>& failed_chains() const { return failed_chains_; }

 private:
  static std::string format(const std::vector<int>& chains, const std::string& detail) {
    std::string msg = "chain failure (chains";
    for (int c : chains) msg += " " + std::to_string(c);
    msg += "): " + detail;
    return msg;
  }

  std::vector<int> failed_chains_;
};

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& detail)
      : std::runtime_error("config key '" + key + "': " + detail), key_(std::move(key)) {}

  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// Indices of the exactly nonzero entries, ascending.
inline IndexSet nonzero_support(const VectorXd& v) {
  IndexSet out;
  for (int j = 0; j < v.size(); ++j) {
    if (v[j] != 0.0) out.push_back(j);
  }
  return out;
}

// True coefficient vectors of a synthetic dataset together with their supports.
struct GroundTruth {
  VectorXd beta0;
  VectorXd gamma0;
  IndexSet support_beta;
  IndexSet support_gamma;
};

inline GroundTruth make_ground_truth(VectorXd beta0, VectorXd gamma0) {
  GroundTruth t;
  t.support_beta = nonzero_support(beta0);
  t.support_gamma = nonzero_support(gamma0);
  t.beta0 = std::move(beta0);
  t.gamma0 = std::move(gamma0);
  return t;
}

// Design matrix, responses, and (for synthetic data) the generating truth.
struct Dataset {
  MatrixXd x;
  VectorXd y;
  std::optional<GroundTruth> truth;

  Eigen::Index n() const { return x.rows(); }
  Eigen::Index d() const { return x.cols(); }

  void validate() const {
    if (x.rows() < 1 || x.cols() < 1) throw ContractViolation("dataset must have n >= 1 and d >= 1");
    if (y.size() != x.rows()) throw ContractViolation("dataset y length must equal number of rows of x");
    if (!x.allFinite() || !y.allFinite()) throw ContractViolation("dataset entries must be finite");
    if (truth) {
      if (truth->beta0.size() != x.cols() || truth->gamma0.size() != x.cols())
        throw ContractViolation("ground truth dimension must match d");
    }
  }
};

// Shape/rate pairs for the four Gamma hyperpriors. a1/b1 govern the squared
// L1-type penalties, a2/b2 the quadratic penalties; one pair per block.
struct Hyperparameters {
  double a_beta1 = 2.0;
  double b_beta1 = 1.0;
  double a_beta2 = 2.0;
  double b_beta2 = 1.0;
  double a_gamma1 = 2.0;
  double b_gamma1 = 1.0;
  double a_gamma2 = 2.0;
  double b_gamma2 = 1.0;

  void validate() const {
    const double v[] = {a_beta1, b_beta1, a_beta2, b_beta2, a_gamma1, b_gamma1, a_gamma2, b_gamma2};
    for (double h : v) {
      if (!(h > 0.0) || !std::isfinite(h)) throw ContractViolation("hyperparameters must be positive and finite");
    }
  }
};

// One Gibbs state. tau entries and the squared L1 penalties are strictly
// positive; the quadratic penalties may sit at the lambda2 = 0 boundary.
struct ChainState {
  VectorXd beta;
  VectorXd gamma;
  VectorXd tau_beta;
  VectorXd tau_gamma;
  double lambda1_beta_sq = 1.0;
  double lambda1_gamma_sq = 1.0;
  double lambda2_beta = 1.0;
  double lambda2_gamma = 1.0;

  void validate(Eigen::Index d) const {
    if (beta.size() != d || gamma.size() != d || tau_beta.size() != d || tau_gamma.size() != d)
      throw ContractViolation("chain state blocks must all have length d");
    if (!beta.allFinite() || !gamma.allFinite()) throw ContractViolation("coefficients must be finite");
    if (!(tau_beta.minCoeff() > 0.0) || !(tau_gamma.minCoeff() > 0.0))
      throw ContractViolation("tau entries must be strictly positive");
    if (!(lambda1_beta_sq > 0.0) || !(lambda1_gamma_sq > 0.0))
      throw ContractViolation("squared L1 penalties must be strictly positive");
    if (lambda2_beta < 0.0 || lambda2_gamma < 0.0)
      throw ContractViolation("quadratic penalties must be nonnegative");
    const double scalars[] = {lambda1_beta_sq, lambda1_gamma_sq, lambda2_beta, lambda2_gamma};
    for (double s : scalars) {
      if (!std::isfinite(s)) throw ContractViolation("penalty scalars must be finite");
    }
  }
};

// Kept draws of one chain. Rows index kept iterations. `scalars` columns are
// [lambda1_beta_sq, lambda1_gamma_sq, lambda2_beta, lambda2_gamma] for the
// heteroscedastic sampler and [sigma2, lambda1_sq, lambda2] for the
// homoscedastic baselines.
struct ChainDraws {
  MatrixXd beta;
  MatrixXd gamma;
  MatrixXd scalars;
  long mh_proposed = 0;
  long mh_accepted = 0;
};

struct PosteriorDraws {
  std::vector<ChainDraws> chains;

  int num_chains() const { return static_cast<int>(chains.size()); }

  Eigen::Index kept_per_chain() const {
    return chains.empty() ? 0 : chains.front().beta.rows();
  }
};

}  // namespace hdben
