#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "hdben/diagnostics.hpp"
#include "hdben/rng.hpp"
#include "hdben/types.hpp"
#include "test_support.hpp"

using namespace hdben;
using namespace testsup;

namespace {

VectorXd iid_normal(int n, std::uint64_t seed, double mean = 0.0, double sd = 1.0) {
  RngStream rng(seed);
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.normal(mean, sd);
  return v;
}

VectorXd ar1(int n, double phi, std::uint64_t seed) {
  RngStream rng(seed);
  VectorXd v(n);
  double x = rng.normal() / std::sqrt(1.0 - phi * phi);
  for (int t = 0; t < 1000; ++t) x = phi * x + rng.normal();
  for (int i = 0; i < n; ++i) {
    x = phi * x + rng.normal();
    v[i] = x;
  }
  return v;
}

}  // namespace

TEST_CASE("linear quantiles interpolate order statistics") {
  std::vector<double> v = {40.0, 10.0, 30.0, 20.0};
  CHECK(quantile_linear(v, 0.5) == doctest::Approx(25.0).epsilon(1e-14));
  CHECK(quantile_linear(v, 0.025) == doctest::Approx(10.75).epsilon(1e-14));
  CHECK(quantile_linear(v, 0.975) == doctest::Approx(39.25).epsilon(1e-14));
  CHECK(quantile_linear(v, 0.0) == 10.0);
  CHECK(quantile_linear(v, 1.0) == 40.0);
  CHECK(quantile_linear({7.0}, 0.3) == 7.0);
}

TEST_CASE("scale reduction of identical constant chains is one") {
  const std::vector<VectorXd> chains = {VectorXd::Constant(20, 3.0), VectorXd::Constant(20, 3.0)};
  CHECK(gelman_rubin(chains) == 1.0);
}

TEST_CASE("scale reduction of matching independent chains is near one") {
  std::vector<VectorXd> chains;
  for (int c = 0; c < 4; ++c) chains.push_back(iid_normal(10000, 600 + static_cast<std::uint64_t>(c)));
  const double r = gelman_rubin(chains);
  CHECK(r >= 0.999);
  CHECK(r <= 1.005);
}

TEST_CASE("scale reduction flags separated chains") {
  const std::vector<VectorXd> chains = {iid_normal(5000, 610, 0.0), iid_normal(5000, 611, 5.0)};
  CHECK(gelman_rubin(chains) > 1.5);
}

TEST_CASE("scale reduction is invariant under a common affine map") {
  std::vector<VectorXd> chains = {iid_normal(4000, 620, 0.3), iid_normal(4000, 621, -0.1)};
  const double before = gelman_rubin(chains);
  for (auto& c : chains) c = (2.5 * c.array() - 7.0).matrix();
  CHECK(std::fabs(gelman_rubin(chains) - before) < 1e-10);
}

TEST_CASE("scale reduction enforces its input contract") {
  CHECK_THROWS_AS(gelman_rubin({iid_normal(100, 630)}), ContractViolation);
  CHECK_THROWS_AS(gelman_rubin({VectorXd::Ones(3), VectorXd::Ones(3)}), ContractViolation);
}

TEST_CASE("effective sample size of independent draws is near the draw count") {
  const double ess = effective_sample_size(iid_normal(10000, 640));
  CHECK(ess >= 9000.0);
  CHECK(ess <= 11000.0);
}

TEST_CASE("effective sample size tracks the autoregressive closed form") {
  const int n = 200000;
  const double ess = effective_sample_size(ar1(n, 0.9, 641));
  const double expected = n * (1.0 - 0.9) / (1.0 + 0.9);
  CHECK(std::fabs(ess - expected) < 0.25 * expected);
}

TEST_CASE("effective sample size of a constant sequence is the draw count") {
  CHECK(effective_sample_size(VectorXd::Constant(500, 2.0)) == 500.0);
}

TEST_CASE("effective sample size is clamped above by the draw count") {
  const double ess = effective_sample_size(ar1(50000, -0.7, 642));
  CHECK(ess <= 50000.0);
  CHECK(ess > 0.0);
}

TEST_CASE("effective sample size is invariant under affine maps") {
  const VectorXd v = ar1(20000, 0.6, 643);
  const VectorXd w = (3.0 * v.array() + 11.0).matrix();
  CHECK(effective_sample_size(v) == doctest::Approx(effective_sample_size(w)).epsilon(1e-10));
}

TEST_CASE("multi-chain effective sample size sums the per-chain estimates") {
  const std::vector<VectorXd> chains = {iid_normal(10000, 650), iid_normal(10000, 651)};
  const double total = effective_sample_size(chains);
  CHECK(total >= 18000.0);
  CHECK(total <= 22000.0);
  CHECK(total == doctest::Approx(effective_sample_size(chains[0]) +
                                 effective_sample_size(chains[1]))
                     .epsilon(1e-12));
}

TEST_CASE("effective sample size needs at least ten draws") {
  CHECK_THROWS_AS(effective_sample_size(VectorXd::Ones(9)), ContractViolation);
}

TEST_CASE("interval rule selects coordinates bounded away from zero") {
  RngStream rng(660);
  const int m = 500;
  MatrixXd pooled(m, 2);
  for (int i = 0; i < m; ++i) {
    pooled(i, 0) = 1.0 + 0.2 * rng.normal();   // strictly positive interval
    pooled(i, 1) = 0.5 * rng.normal();         // straddles zero
  }
  const IndexSet sel = select_support(pooled, SupportRule{});
  REQUIRE(sel.size() == 1);
  CHECK(sel[0] == 0);
}

TEST_CASE("interval rule counts a zero endpoint as containing zero") {
  // 41 sorted draws: the 2.5% interpolation index lands on order statistic 1,
  // and the adjacent draw is also zero so rounding in the tail probability
  // cannot lift the endpoint above zero
  MatrixXd pooled(41, 1);
  pooled(0, 0) = -5.0;
  pooled(1, 0) = 0.0;
  pooled(2, 0) = 0.0;
  for (int i = 3; i < 39; ++i) pooled(i, 0) = 0.01 * i;
  pooled(39, 0) = 1.0;
  pooled(40, 0) = 7.0;
  CHECK(select_support(pooled, SupportRule{}).empty());
}

TEST_CASE("magnitude rule at threshold zero selects nonzero medians") {
  MatrixXd pooled(5, 3);
  pooled.col(0).setConstant(0.4);
  pooled.col(1).setZero();
  pooled.col(2).setConstant(-2.0);
  SupportRule rule;
  rule.kind = SupportRule::Kind::magnitude;
  rule.threshold = 0.0;
  const IndexSet sel = select_support(pooled, rule);
  CHECK(sel == IndexSet{0, 2});
}

TEST_CASE("support rule validation rejects out-of-range levels") {
  SupportRule rule;
  rule.level = 0.5;
  CHECK_THROWS_AS(rule.validate(), ContractViolation);
  rule.level = 1.0;
  CHECK_THROWS_AS(rule.validate(), ContractViolation);
}

TEST_CASE("summaries match a hand-computed draw matrix") {
  PosteriorDraws draws;
  draws.chains.resize(1);
  ChainDraws& c = draws.chains[0];
  c.beta.resize(5, 2);
  c.beta.col(0) << 1.0, 2.0, 3.0, 4.0, 5.0;
  c.beta.col(1) << -1.0, 0.0, 1.0, 2.0, 7.0;
  c.gamma.resize(5, 0);
  c.scalars.resize(5, 3);
  c.scalars.setOnes();
  c.mh_proposed = 8;
  c.mh_accepted = 2;
  const FitSummary s = summarize(draws);
  CHECK(s.beta.mean[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(s.beta.median[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(s.beta.sd[0] == doctest::Approx(std::sqrt(2.5)).epsilon(1e-12));
  CHECK(s.beta.q_lo[0] == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(s.beta.q_hi[0] == doctest::Approx(4.9).epsilon(1e-12));
  CHECK(s.beta.mean[1] == doctest::Approx(1.8).epsilon(1e-14));
  CHECK(s.beta.median[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.mh_acceptance == doctest::Approx(0.25).epsilon(1e-15));
  // single-chain and short-chain fallbacks
  CHECK(s.beta.rhat[0] == 1.0);
  CHECK(s.beta.ess[0] == 5.0);
  // the empty gamma block stays empty rather than erroring
  CHECK(s.gamma.mean.size() == 0);
}

TEST_CASE("summaries center the median of symmetric draws at zero") {
  PosteriorDraws draws;
  draws.chains.resize(1);
  ChainDraws& c = draws.chains[0];
  const int m = 5000;
  c.beta.resize(m, 1);
  RngStream rng(670);
  for (int i = 0; i < m; ++i) c.beta(i, 0) = rng.normal();
  c.gamma.resize(m, 0);
  c.scalars.resize(m, 3);
  c.scalars.setOnes();
  c.mh_proposed = 0;
  c.mh_accepted = 0;
  const FitSummary s = summarize(draws);
  CHECK(std::fabs(s.beta.median[0]) < 0.05);
  // no proposals recorded: acceptance reported as vacuously full
  CHECK(s.mh_acceptance == 1.0);
}

TEST_CASE("support metrics on exact, empty, and partial selections") {
  const SupportMetrics exact = support_metrics(IndexSet{1, 3}, IndexSet{1, 3}, 10);
  CHECK(exact.tpr == 1.0);
  CHECK(exact.fpr == 0.0);
  CHECK(exact.exact);

  const SupportMetrics none = support_metrics(IndexSet{}, IndexSet{1, 3}, 10);
  CHECK(none.tpr == 0.0);
  CHECK(none.fpr == 0.0);
  CHECK_FALSE(none.exact);

  const SupportMetrics half = support_metrics(IndexSet{0, 2}, IndexSet{0, 1}, 10);
  CHECK(half.tpr == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(half.fpr == doctest::Approx(0.125).epsilon(1e-15));
  CHECK_FALSE(half.exact);

  const SupportMetrics empty_truth = support_metrics(IndexSet{0}, IndexSet{}, 4);
  CHECK(empty_truth.tpr == 1.0);
  CHECK(empty_truth.fpr == doctest::Approx(0.25).epsilon(1e-15));

  const SupportMetrics full_truth = support_metrics(IndexSet{0, 1}, IndexSet{0, 1}, 2);
  CHECK(full_truth.fpr == 0.0);
}

TEST_CASE("l2 error is the euclidean distance") {
  CHECK(l2_error(VectorXd::Ones(3), VectorXd::Ones(3)) == 0.0);
  VectorXd a(2), b(2);
  a << 3.0, 4.0;
  b << 0.0, 0.0;
  CHECK(l2_error(a, b) == doctest::Approx(5.0).epsilon(1e-15));

  RngStream rng(680);
  VectorXd u(7), v(7);
  for (int i = 0; i < 7; ++i) {
    u[i] = rng.normal();
    v[i] = rng.normal();
  }
  double acc = 0.0;
  for (int i = 0; i < 7; ++i) acc += (u[i] - v[i]) * (u[i] - v[i]);
  CHECK(l2_error(u, v) == doctest::Approx(std::sqrt(acc)).epsilon(1e-12));
  CHECK_THROWS_AS(l2_error(VectorXd::Ones(2), VectorXd::Ones(3)), ContractViolation);
}

TEST_CASE("error-to-rate ratio behaves definitionally") {
  const double rate = (3 + 2) * std::log(50.0) / 100.0;
  CHECK(contraction_ratio(rate, 100, 50, 3, 2) == doctest::Approx(1.0).epsilon(1e-12));
  const double r1 = contraction_ratio(0.8, 100, 50, 3, 2);
  const double r2 = contraction_ratio(0.8, 200, 50, 3, 2);
  CHECK(r2 == doctest::Approx(2.0 * r1).epsilon(1e-12));
  // benchmark grid cell used as a regression pin
  CHECK(contraction_ratio(4.0612 * 4.0612, 200, 250, 10, 10) ==
        doctest::Approx(29.87134326468394).epsilon(1e-12));
  CHECK_THROWS_AS(contraction_ratio(1.0, 100, 1, 3, 2), ContractViolation);
  CHECK_THROWS_AS(contraction_ratio(1.0, 100, 50, 0, 0), ContractViolation);
}
