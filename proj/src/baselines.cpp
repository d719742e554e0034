#include "hdben/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hdben/linalg.hpp"
#include "hdben/samplers.hpp"

namespace hdben {

VectorXd fit_ols(const Dataset& data) {
  data.validate();
  return min_norm_least_squares(data.x, data.y);
}

namespace {

inline double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

double enet_objective(const VectorXd& r, const VectorXd& beta, double l1, double l2, double n) {
  return 0.5 * r.squaredNorm() / n + l1 * beta.lpNorm<1>() + l2 * beta.squaredNorm();
}

// Coordinate descent from an arbitrary starting point (warm starts reuse it
// along the cross-validation path).
EnetResult fit_enet_from(const Dataset& data, const EnetConfig& cfg, VectorXd init) {
  const Eigen::Index n = data.n();
  const Eigen::Index d = data.d();
  const double nd = static_cast<double>(n);
  const MatrixXd& x = data.x;

  VectorXd col_sq(d);
  for (Eigen::Index j = 0; j < d; ++j) col_sq[j] = x.col(j).squaredNorm() / nd;

  EnetResult res;
  res.beta = std::move(init);
  VectorXd r = data.y - x * res.beta;
  double prev_obj = enet_objective(r, res.beta, cfg.l1_weight, cfg.l2_weight, nd);

  for (int sweep = 0; sweep < cfg.max_iter; ++sweep) {
    double max_delta = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      const double denom = col_sq[j] + 2.0 * cfg.l2_weight;
      if (denom <= 0.0) continue;
      const double old = res.beta[j];
      const double rho = x.col(j).dot(r) / nd + col_sq[j] * old;
      const double updated = soft_threshold(rho, cfg.l1_weight) / denom;
      if (updated != old) {
        r -= x.col(j) * (updated - old);
        res.beta[j] = updated;
        max_delta = std::max(max_delta, std::abs(updated - old));
      }
    }
    ++res.sweeps;

    // Exact coordinate minimization cannot increase the objective; the
    // residual is refreshed periodically to keep that guarantee numerical.
    if (res.sweeps % 100 == 0) r = data.y - x * res.beta;
    const double obj = enet_objective(r, res.beta, cfg.l1_weight, cfg.l2_weight, nd);
    if (obj > prev_obj + 1e-10 * (1.0 + std::abs(prev_obj)))
      throw std::logic_error("coordinate descent objective increased");
    res.objective_trace.push_back(obj);
    prev_obj = obj;

    if (max_delta < cfg.tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace

EnetResult fit_enet(const Dataset& data, const EnetConfig& cfg) {
  data.validate();
  cfg.validate();
  return fit_enet_from(data, cfg, VectorXd::Zero(data.d()));
}

EnetConfig cv_select_enet(const Dataset& data, const EnetConfig& cfg, EnetKind kind) {
  data.validate();
  cfg.validate();
  const Eigen::Index n = data.n();
  const Eigen::Index d = data.d();
  if (n < cfg.cv_folds) throw ContractViolation("cross-validation needs n >= cv_folds");

  const double lambda_max =
      ((data.x.transpose() * data.y) / static_cast<double>(n)).cwiseAbs().maxCoeff();
  if (!(lambda_max > 0.0)) {
    // No pull toward any coordinate: every penalty yields beta = 0.
    EnetConfig out = cfg;
    out.l1_weight = 1.0;
    out.l2_weight = kind == EnetKind::elastic_net ? 0.5 : 0.0;
    return out;
  }

  // Geometric grid over [1e-3, 1] * lambda_max, descending for warm starts.
  const int g = cfg.lambda_grid_size;
  std::vector<double> grid(static_cast<size_t>(g));
  for (int i = 0; i < g; ++i)
    grid[static_cast<size_t>(i)] =
        lambda_max * std::pow(1e-3, static_cast<double>(i) / static_cast<double>(g - 1));

  // Seeded permutation, folds assigned round-robin.
  std::vector<Eigen::Index> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  RngStream rng = RngStream::derive(cfg.seed, 0xC5u);
  for (Eigen::Index i = n - 1; i > 0; --i) {
    const auto j = static_cast<Eigen::Index>(rng.uniform() * static_cast<double>(i + 1));
    std::swap(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]);
  }
  std::vector<int> fold_of(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    fold_of[static_cast<size_t>(perm[static_cast<size_t>(i)])] =
        static_cast<int>(i % cfg.cv_folds);

  std::vector<double> cv_mse(static_cast<size_t>(g), 0.0);
  for (int f = 0; f < cfg.cv_folds; ++f) {
    std::vector<Eigen::Index> train, val;
    for (Eigen::Index i = 0; i < n; ++i)
      (fold_of[static_cast<size_t>(i)] == f ? val : train).push_back(i);
    if (val.empty() || train.empty()) continue;

    Dataset sub;
    sub.x.resize(static_cast<Eigen::Index>(train.size()), d);
    sub.y.resize(static_cast<Eigen::Index>(train.size()));
    for (size_t i = 0; i < train.size(); ++i) {
      sub.x.row(static_cast<Eigen::Index>(i)) = data.x.row(train[i]);
      sub.y[static_cast<Eigen::Index>(i)] = data.y[train[i]];
    }

    VectorXd warm = VectorXd::Zero(d);
    for (int i = 0; i < g; ++i) {
      EnetConfig c = cfg;
      c.l1_weight = grid[static_cast<size_t>(i)];
      c.l2_weight = kind == EnetKind::elastic_net ? c.l1_weight / 2.0 : 0.0;
      EnetResult fit = fit_enet_from(sub, c, warm);
      warm = fit.beta;
      double mse = 0.0;
      for (Eigen::Index v : val) {
        const double e = data.y[v] - data.x.row(v).dot(fit.beta);
        mse += e * e;
      }
      cv_mse[static_cast<size_t>(i)] += mse / static_cast<double>(val.size());
    }
  }

  // The grid is descending, so strict improvement keeps the largest minimizer.
  size_t best = 0;
  for (size_t i = 1; i < cv_mse.size(); ++i) {
    if (cv_mse[i] < cv_mse[best]) best = i;
  }
  EnetConfig out = cfg;
  out.l1_weight = grid[best];
  out.l2_weight = kind == EnetKind::elastic_net ? out.l1_weight / 2.0 : 0.0;
  return out;
}

namespace {

// Gibbs core shared by the homoscedastic baselines. `scalars` columns:
// [sigma2, lambda1_sq, lambda2].
ChainDraws run_homo_chain(const Dataset& data, const Hyperparameters& hyp,
                          const HomoBayesConfig& cfg, int chain_index, bool elastic) {
  const Eigen::Index n = data.n();
  const Eigen::Index d = data.d();
  RngStream rng = RngStream::derive(cfg.seed, static_cast<std::uint64_t>(chain_index));

  VectorXd beta = min_norm_least_squares(data.x, data.y);
  VectorXd tau = VectorXd::Ones(d);
  double lambda1_sq = 1.0;
  double lambda2 = elastic ? 1.0 : 0.0;
  const double var_y =
      n > 1 ? (data.y.array() - data.y.mean()).square().sum() / static_cast<double>(n - 1) : 1.0;
  double sigma2 = var_y > 0.0 ? var_y : 1.0;

  const bool narrow = d <= 4 * n;
  MatrixXd xtx;
  VectorXd xty;
  if (narrow) {
    xtx = MatrixXd::Zero(d, d);
    xtx.selfadjointView<Eigen::Lower>().rankUpdate(data.x.transpose());
    xtx.triangularView<Eigen::StrictlyUpper>() = xtx.transpose();
    xty = data.x.transpose() * data.y;
  }

  const int kept = cfg.kept_per_chain();
  ChainDraws out;
  out.beta.resize(kept, d);
  out.gamma.resize(kept, 0);
  out.scalars.resize(kept, 3);

  int row = 0;
  for (int it = 0; it < cfg.iterations; ++it) {
    try {
      VectorXd prior_prec = tau.cwiseInverse();
      if (elastic) prior_prec.array() += lambda2;

      if (narrow) {
        MatrixXd a = xtx / sigma2;
        a.diagonal() += prior_prec;
        auto llt = cholesky_spd(a, "coefficient update");
        VectorXd mean = llt.solve(xty / sigma2);
        VectorXd z(d);
        for (Eigen::Index j = 0; j < d; ++j) z[j] = rng.normal();
        beta = mean + llt.matrixU().solve(z);
      } else {
        const double inv_sigma = 1.0 / std::sqrt(sigma2);
        beta = draw_conditional_coefficients(data.x * inv_sigma, data.y * inv_sigma, prior_prec,
                                             rng);
      }

      tau = update_tau_vector(beta, lambda1_sq, TauUpdateMode::reciprocal, 1e-10, rng);
      lambda1_sq = update_lambda1_sq(tau, hyp.a_beta1, hyp.b_beta1, rng);
      if (elastic) lambda2 = update_lambda2(beta, hyp.a_beta2, hyp.b_beta2, rng);

      const double rss = (data.y - data.x * beta).squaredNorm();
      sigma2 = 1.0 / sample_gamma_variate(cfg.sigma2_shape + 0.5 * static_cast<double>(n),
                                          cfg.sigma2_rate + 0.5 * rss, rng);
    } catch (const SingularityError& e) {
      throw SingularityError("chain " + std::to_string(chain_index) + ", iteration " +
                                 std::to_string(it) + ": " + e.what(),
                             e.smallest_pivot());
    }

    if (it >= cfg.burn_in && (it - cfg.burn_in) % cfg.thinning == 0) {
      out.beta.row(row) = beta;
      out.scalars(row, 0) = sigma2;
      out.scalars(row, 1) = lambda1_sq;
      out.scalars(row, 2) = lambda2;
      ++row;
    }
  }
  return out;
}

PosteriorDraws fit_homo(const Dataset& data, const Hyperparameters& hyp,
                        const HomoBayesConfig& cfg, bool elastic) {
  data.validate();
  hyp.validate();
  cfg.validate();

  PosteriorDraws out;
  out.chains.resize(static_cast<size_t>(cfg.chains));
  std::vector<int> failed;
  std::string detail;
  for (int c = 0; c < cfg.chains; ++c) {
    try {
      out.chains[static_cast<size_t>(c)] = run_homo_chain(data, hyp, cfg, c, elastic);
    } catch (const std::exception& e) {
      failed.push_back(c);
      if (detail.empty()) detail = e.what();
    }
  }
  if (!failed.empty()) throw ChainFailure(failed, detail);
  return out;
}

}  // namespace

PosteriorDraws fit_blasso(const Dataset& data, const Hyperparameters& hyp,
                          const HomoBayesConfig& cfg) {
  return fit_homo(data, hyp, cfg, false);
}

PosteriorDraws fit_ben(const Dataset& data, const Hyperparameters& hyp,
                       const HomoBayesConfig& cfg) {
  return fit_homo(data, hyp, cfg, true);
}

}  // namespace hdben
