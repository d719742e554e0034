#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "hdben/rng.hpp"
#include "hdben/types.hpp"
#include "test_support.hpp"

using namespace hdben;
using namespace testsup;

TEST_CASE("seed derivation is deterministic and stream-separated") {
  CHECK(derive_seed(42, 0) == derive_seed(42, 0));
  CHECK(derive_seed(42, 0) != derive_seed(42, 1));
  CHECK(derive_seed(42, 0) != derive_seed(43, 0));
  // a derived stream does not collide with its parent
  CHECK(derive_seed(42, 0) != 42);
}

TEST_CASE("identical seeds give identical draw sequences") {
  RngStream a(7), b(7);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.uniform() == b.uniform());
  }
  RngStream c(7), d(7);
  for (int i = 0; i < 100; ++i) {
    CHECK(c.normal() == d.normal());
    CHECK(sample_gamma_variate(2.5, 1.5, c) == sample_gamma_variate(2.5, 1.5, d));
    CHECK(sample_inverse_gaussian(2.0, 8.0, c) == sample_inverse_gaussian(2.0, 8.0, d));
  }
}

TEST_CASE("uniform draws live in [0,1) with mean one half") {
  RngStream rng(11);
  const int n = 1000000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    acc += u;
  }
  CHECK(std::fabs(acc / n - 0.5) < 0.002);
}

TEST_CASE("normal draws have standard moments") {
  RngStream rng(12);
  const int n = 1000000;
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  CHECK(std::fabs(mean_of(v)) < 0.01);
  CHECK(std::fabs(var_of(v) - 1.0) < 0.02);
}

TEST_CASE("exponential draws have mean 1/rate") {
  RngStream rng(13);
  const int n = 1000000;
  std::vector<double> v(n);
  for (auto& x : v) {
    x = rng.exponential(2.0);
    REQUIRE(x >= 0.0);
  }
  CHECK(std::fabs(mean_of(v) - 0.5) < 0.005);
}

TEST_CASE("gamma sampler moments: unit exponential case") {
  RngStream rng(21);
  const int n = 1000000;
  std::vector<double> v(n);
  for (auto& x : v) x = sample_gamma_variate(1.0, 1.0, rng);
  CHECK(std::fabs(mean_of(v) - 1.0) < 0.01);
}

TEST_CASE("gamma sampler moments: shape 5 rate 2") {
  RngStream rng(22);
  const int n = 1000000;
  std::vector<double> v(n);
  for (auto& x : v) x = sample_gamma_variate(5.0, 2.0, rng);
  CHECK(std::fabs(mean_of(v) - 2.5) < 0.01);
  CHECK(std::fabs(var_of(v) - 1.25) < 0.02);
}

TEST_CASE("gamma sampler handles shape below one and stays positive") {
  RngStream rng(23);
  const int n = 200000;
  std::vector<double> v(n);
  for (auto& x : v) {
    x = sample_gamma_variate(0.5, 1.0, rng);
    REQUIRE(x > 0.0);
  }
  CHECK(std::fabs(mean_of(v) - 0.5) < 0.01);
}

TEST_CASE("gamma sampler rejects non-positive parameters") {
  RngStream rng(24);
  CHECK_THROWS_AS(sample_gamma_variate(0.0, 1.0, rng), ContractViolation);
  CHECK_THROWS_AS(sample_gamma_variate(1.0, -1.0, rng), ContractViolation);
}

TEST_CASE("gamma draw density matches its distribution by chi-square") {
  RngStream rng(25);
  const int n = 1000000;
  std::vector<double> v(n);
  for (auto& x : v) x = sample_gamma_variate(5.0, 2.0, rng);
  std::vector<double> edges;
  for (double e = 0.8; e <= 5.2; e += 0.3) edges.push_back(e);
  const auto counts = bin_draws(v, edges);
  const auto masses = cell_masses(edges, [](double x) { return gamma_cdf(x, 5.0, 2.0); });
  const double stat = chi2_statistic(counts, masses, n);
  const double df = static_cast<double>(counts.size()) - 1.0;
  CHECK(stat < chi2_upper_crit(df, 2.3263478740408408));  // 1% level
}

TEST_CASE("inverse gaussian moments match mu and mu^3 over lambda") {
  RngStream rng(31);
  const int n = 1000000;
  std::vector<double> v(n);
  for (auto& x : v) {
    x = sample_inverse_gaussian(2.0, 8.0, rng);
    REQUIRE(x > 0.0);
  }
  CHECK(std::fabs(mean_of(v) - 2.0) < 0.01);
  CHECK(std::fabs(var_of(v) - 1.0) < 0.02);
}

TEST_CASE("inverse gaussian concentrates at mu for huge lambda") {
  RngStream rng(32);
  const int n = 100000;
  std::vector<double> v(n);
  for (auto& x : v) x = sample_inverse_gaussian(1.0, 1e6, rng);
  CHECK(std::fabs(mean_of(v) - 1.0) < 0.001);
  CHECK(std::sqrt(var_of(v)) < 0.002);
}

TEST_CASE("inverse gaussian rejects non-positive parameters") {
  RngStream rng(33);
  CHECK_THROWS_AS(sample_inverse_gaussian(0.0, 1.0, rng), ContractViolation);
  CHECK_THROWS_AS(sample_inverse_gaussian(1.0, 0.0, rng), ContractViolation);
}

TEST_CASE("inverse gaussian histogram matches the closed-form density") {
  RngStream rng(34);
  const int n = 1000000;
  std::vector<double> v(n);
  for (auto& x : v) x = sample_inverse_gaussian(2.0, 8.0, rng);
  std::vector<double> edges;
  for (double e = 0.7; e <= 4.3; e += 0.2) edges.push_back(e);
  const auto counts = bin_draws(v, edges);
  const auto masses =
      cell_masses(edges, [](double x) { return inverse_gaussian_cdf(x, 2.0, 8.0); });
  const double stat = chi2_statistic(counts, masses, n);
  const double df = static_cast<double>(counts.size()) - 1.0;
  CHECK(stat < chi2_upper_crit(df, 2.3263478740408408));  // 1% level
}

TEST_CASE("multivariate normal identity covariance moments") {
  RngStream rng(41);
  const VectorXd mean = VectorXd::Zero(2);
  const MatrixXd cov = MatrixXd::Identity(2, 2);
  const int n = 1000000;
  std::vector<double> c0(n), c1(n);
  for (int i = 0; i < n; ++i) {
    const VectorXd draw = sample_mvn_spd(mean, cov, SpdKind::covariance, rng);
    c0[static_cast<std::size_t>(i)] = draw[0];
    c1[static_cast<std::size_t>(i)] = draw[1];
  }
  CHECK(std::fabs(mean_of(c0)) < 0.01);
  CHECK(std::fabs(mean_of(c1)) < 0.01);
  CHECK(std::fabs(var_of(c0) - 1.0) < 0.02);
  CHECK(std::fabs(var_of(c1) - 1.0) < 0.02);
}

TEST_CASE("multivariate normal near-degenerate covariance pins draws to the mean") {
  RngStream rng(42);
  VectorXd mean(2);
  mean << 3.0, -1.5;
  const MatrixXd cov = 1e-12 * MatrixXd::Identity(2, 2);
  for (int i = 0; i < 1000; ++i) {
    const VectorXd draw = sample_mvn_spd(mean, cov, SpdKind::covariance, rng);
    REQUIRE(std::fabs(draw[0] - 3.0) < 1e-5);
    REQUIRE(std::fabs(draw[1] + 1.5) < 1e-5);
  }
}

TEST_CASE("multivariate normal reproduces a full covariance target") {
  RngStream rng(43);
  VectorXd mean(2);
  mean << 1.0, -2.0;
  MatrixXd cov(2, 2);
  cov << 2.0, 0.6, 0.6, 1.0;
  const int n = 100000;
  MatrixXd draws(n, 2);
  for (int i = 0; i < n; ++i) draws.row(i) = sample_mvn_spd(mean, cov, SpdKind::covariance, rng);
  const Eigen::RowVector2d m = draws.colwise().mean();
  const MatrixXd centered = draws.rowwise() - m;
  const MatrixXd sample_cov = centered.transpose() * centered / (n - 1.0);
  CHECK((sample_cov - cov).cwiseAbs().maxCoeff() < 0.05);
  CHECK(std::fabs(m[0] - 1.0) < 0.05);
  CHECK(std::fabs(m[1] + 2.0) < 0.05);
}

TEST_CASE("multivariate normal precision input matches covariance input in law") {
  RngStream rng(44);
  VectorXd mean(2);
  mean << 0.5, 0.5;
  MatrixXd cov(2, 2);
  cov << 2.0, 0.6, 0.6, 1.0;
  const MatrixXd prec = cov.inverse();
  const int n = 100000;
  MatrixXd draws(n, 2);
  for (int i = 0; i < n; ++i) draws.row(i) = sample_mvn_spd(mean, prec, SpdKind::precision, rng);
  const Eigen::RowVector2d m = draws.colwise().mean();
  const MatrixXd centered = draws.rowwise() - m;
  const MatrixXd sample_cov = centered.transpose() * centered / (n - 1.0);
  CHECK((sample_cov - cov).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("multivariate normal surfaces factorization failure with pivot detail") {
  RngStream rng(45);
  const VectorXd mean = VectorXd::Zero(2);
  MatrixXd bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;  // indefinite
  CHECK_THROWS_AS(sample_mvn_spd(mean, bad, SpdKind::covariance, rng), SingularityError);
}
