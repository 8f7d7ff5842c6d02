#include "msfa/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace msfa {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), gen_(splitmix64(seed)) {}

std::uint64_t Rng::raw() { return gen_(); }

double Rng::uniform() {
  // 53-bit mantissa; shift into (0,1) so log() of either tail is finite.
  const double u = (gen_() >> 11) * 0x1.0p-53;
  return u + 0x1.0p-54;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  // Box-Muller, cosine branch only: two uniforms per variate, no cache.
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

double Rng::normal(double mean, double sd) { return mean + sd * normal(); }

double Rng::gamma(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0))
    throw std::invalid_argument("gamma: shape and rate must be positive");
  if (shape < 1.0) {
    // Boost to shape+1 and scale back (Marsaglia-Tsang, section 6).
    const double u = uniform();
    return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

double Rng::inverse_gamma(double shape, double scale) {
  return scale / gamma(shape, 1.0);
}

double Rng::beta(double a, double b) {
  const double x = gamma(a, 1.0);
  const double y = gamma(b, 1.0);
  return x / (x + y);
}

double Rng::exponential(double rate) { return -std::log(uniform()) / rate; }

int Rng::categorical_log(std::span<const double> logw) {
  const int n = static_cast<int>(logw.size());
  double m = logw[0];
  for (int i = 1; i < n; ++i) m = std::max(m, logw[i]);
  double total = 0.0;
  for (int i = 0; i < n; ++i) total += std::exp(logw[i] - m);
  double u = uniform() * total;
  for (int i = 0; i < n; ++i) {
    u -= std::exp(logw[i] - m);
    if (u <= 0.0) return i;
  }
  return n - 1;
}

int Rng::categorical(std::span<const double> w) {
  const int n = static_cast<int>(w.size());
  double total = 0.0;
  for (int i = 0; i < n; ++i) total += w[i];
  double u = uniform() * total;
  for (int i = 0; i < n; ++i) {
    u -= w[i];
    if (u <= 0.0) return i;
  }
  return n - 1;
}

Eigen::VectorXd Rng::normal_vector(int n) {
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z[i] = normal();
  return z;
}

Rng Rng::child(std::uint64_t index) const {
  return Rng(splitmix64(seed_ ^ splitmix64(index + 1)));
}

}  // namespace msfa
