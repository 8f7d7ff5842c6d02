#include "msfa/normal_gamma.hpp"

#include <cmath>

#include "msfa/gig.hpp"

namespace msfa {

void NormalGammaState::validate() const {
  if (!(global > 0.0)) throw ParameterError("NormalGammaState: global scale must be positive");
  if (!(omega > 0.0) || !(c0 > 0.0) || !(c1 > 0.0))
    throw ParameterError("NormalGammaState: hyperparameters must be positive");
  for (int i = 0; i < local.size(); ++i)
    if (!(local[i] > 0.0))
      throw ParameterError("NormalGammaState: local scales must be positive");
}

NormalGammaState NormalGammaState::prior_init(int n, double omega, double c0,
                                              double c1) {
  NormalGammaState s;
  s.omega = omega;
  s.c0 = c0;
  s.c1 = c1;
  s.global = c0 / c1;  // prior mean
  s.local = VectorXd::Constant(n, 2.0 / s.global);
  return s;
}

VectorXd update_local_scales(const VectorXd& coeffs, const NormalGammaState& state,
                             Rng& rng) {
  state.validate();
  if (coeffs.size() != state.local.size())
    throw DimensionError("update_local_scales: coeffs/local length mismatch");
  const double p = state.omega - 0.5;
  const double a = state.omega * state.global;
  VectorXd out(coeffs.size());
  for (int i = 0; i < coeffs.size(); ++i) {
    // floor keeps the chain off the ng-collapse ray when a coefficient is
    // numerically zero
    const double b = std::max(coeffs[i] * coeffs[i], 1e-12);
    out[i] = draw_gig(p, a, b, rng);
  }
  return out;
}

double update_global_scale(const VectorXd& local, double omega, double c0,
                           double c1, Rng& rng) {
  if (local.size() == 0) throw DimensionError("update_global_scale: empty local vector");
  const double shape = omega * static_cast<double>(local.size()) + c0;
  const double rate = c1 + 0.5 * omega * local.sum();
  return rng.gamma(shape, rate);
}

void update_normal_gamma(const VectorXd& coeffs, NormalGammaState& state, Rng& rng) {
  state.local = update_local_scales(coeffs, state, rng);
  state.global = update_global_scale(state.local, state.omega, state.c0, state.c1, rng);
}

}  // namespace msfa
