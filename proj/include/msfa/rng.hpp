#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <span>

namespace msfa {

/// Deterministic random stream. All variate generators are implemented on
/// top of raw 64-bit output so that sequences are reproducible bit-for-bit
/// across platforms and standard-library versions. Child streams are derived
/// from the construction seed (not from consumed state), so a parent may
/// split work without its own draw position affecting the children.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t raw();

  /// Uniform on the open interval (0, 1).
  double uniform();
  double uniform(double lo, double hi);

  double normal();
  double normal(double mean, double sd);

  /// Gamma(shape, rate); mean shape/rate. Marsaglia-Tsang.
  double gamma(double shape, double rate);

  /// Inverse gamma with shape a and scale b: 1/x ~ Gamma(a, rate=1/b)...
  /// parameterized so mean = b/(a-1) for a > 1.
  double inverse_gamma(double shape, double scale);

  double beta(double a, double b);
  double exponential(double rate);

  /// Index in [0, n) with probability proportional to exp(logw[i] - max).
  int categorical_log(std::span<const double> logw);
  int categorical(std::span<const double> w);

  Eigen::VectorXd normal_vector(int n);

  /// Child stream number `index`, derived from this stream's seed by a
  /// SplitMix64 hash of (seed, index).
  Rng child(std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace msfa
