#pragma once

#include <cstdint>
#include <random>

#include "hdben/types.hpp"

namespace hdben {

// Stateless mixing of a base seed with a stream index; used to hand every
// chain, replicate, and method its own independent deterministic stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Deterministic random stream. All distribution transforms are implemented
// here on top of the raw engine so draws are bit-identical across platforms.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  static RngStream derive(std::uint64_t seed, std::uint64_t stream) {
    return RngStream(derive_seed(seed, stream));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1); safe as a log argument.
  double uniform_pos() {
    double u;
    do {
      u = uniform();
    } while (u <= 0.0);
    return u;
  }

  // Standard normal via Box-Muller.
  double normal();

  double normal(double mean, double sd) { return mean + sd * normal(); }

  double exponential(double rate);

 private:
  std::mt19937_64 engine_;
};

// Gamma(shape, rate) draw, mean shape/rate.
double sample_gamma_variate(double shape, double rate, RngStream& rng);

// Inverse-Gaussian(mu, lambda) draw, mean mu, variance mu^3/lambda.
double sample_inverse_gaussian(double mu, double lambda, RngStream& rng);

enum class SpdKind { covariance, precision };

// Multivariate normal draw given either the covariance or the precision
// matrix of the target; factorization failure raises SingularityError.
VectorXd sample_mvn_spd(const VectorXd& mean, const MatrixXd& matrix, SpdKind kind,
                        RngStream& rng);

}  // namespace hdben
