#include "hdben/rng.hpp"

#include <cmath>

#include "hdben/linalg.hpp"

namespace hdben {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed;
  std::uint64_t mixed = splitmix64(state);
  state ^= stream * 0xD6E8FEB86659FD93ULL;
  mixed ^= splitmix64(state);
  return mixed;
}

double RngStream::normal() {
  double u1 = uniform_pos();
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double RngStream::exponential(double rate) {
  if (!(rate > 0.0)) throw ContractViolation("exponential rate must be positive");
  return -std::log(uniform_pos()) / rate;
}

// Marsaglia-Tsang squeeze; shapes below 1 are boosted by U^{1/shape}.
double sample_gamma_variate(double shape, double rate, RngStream& rng) {
  if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate))
    throw ContractViolation("gamma shape and rate must be positive and finite");

  double boost = 1.0;
  double a = shape;
  if (a < 1.0) {
    boost = std::pow(rng.uniform_pos(), 1.0 / a);
    a += 1.0;
  }
  const double dd = a - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * dd);
  for (;;) {
    double z, v;
    do {
      z = rng.normal();
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_pos();
    if (u < 1.0 - 0.0331 * z * z * z * z) return boost * dd * v / rate;
    if (std::log(u) < 0.5 * z * z + dd * (1.0 - v + std::log(v))) return boost * dd * v / rate;
  }
}

// Michael-Schucany-Haas. The larger root of lam (x - mu)^2 = y mu^2 x is
// computed first; the smaller root mu^2 / x_plus then has no cancellation even
// when mu*y dwarfs lam.
double sample_inverse_gaussian(double mu, double lambda, RngStream& rng) {
  if (!(mu > 0.0) || !(lambda > 0.0) || !std::isfinite(mu) || !std::isfinite(lambda))
    throw ContractViolation("inverse-Gaussian parameters must be positive and finite");

  const double z = rng.normal();
  const double y = z * z;
  const double x_plus = mu + (mu * mu * y) / (2.0 * lambda) +
                        (mu / (2.0 * lambda)) * std::sqrt(4.0 * mu * lambda * y + mu * mu * y * y);
  const double x_minus = mu * mu / x_plus;
  const double u = rng.uniform();
  return (u <= mu / (mu + x_minus)) ? x_minus : x_plus;
}

VectorXd sample_mvn_spd(const VectorXd& mean, const MatrixXd& matrix, SpdKind kind,
                        RngStream& rng) {
  const Eigen::Index d = mean.size();
  if (matrix.rows() != d || matrix.cols() != d)
    throw ContractViolation("mvn matrix must be d x d for a d-vector mean");

  auto llt = cholesky_spd(matrix, "mvn factorization");
  VectorXd z(d);
  for (Eigen::Index j = 0; j < d; ++j) z[j] = rng.normal();

  if (kind == SpdKind::covariance) {
    // x = mean + L z with cov = L L'.
    return mean + llt.matrixL() * z;
  }
  // Precision P = L L': solving L' x = z gives cov(x) = P^-1.
  return mean + llt.matrixU().solve(z);
}

}  // namespace hdben
