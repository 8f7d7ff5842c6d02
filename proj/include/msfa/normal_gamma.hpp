#pragma once

#include "msfa/rng.hpp"
#include "msfa/types.hpp"

namespace msfa {

/// One normal-gamma shrinkage group: coefficients beta_i carry conditional
/// prior variance local[i], the locals share the group's global scale via
///   beta_i | local_i ~ N(0, local_i),
///   local_i | lambda2 ~ Gamma(omega, rate omega*lambda2/2),
///   lambda2 ~ Gamma(c0, rate c1),
/// so marginally Var(beta_i) = 2/lambda2 and omega = 1 recovers the Bayesian
/// LASSO's Laplace marginal. One group per switching state for the logit
/// slopes; one group per loadings row for the factor model.
struct NormalGammaState {
  VectorXd local;       // strictly positive conditional prior variances
  double global = 1.0;  // lambda^2 > 0
  double omega = 0.6;
  double c0 = 0.01;
  double c1 = 0.01;

  void validate() const;
  static NormalGammaState prior_init(int n, double omega, double c0, double c1);
};

/// Full-conditional update of the local scales given their coefficients:
/// local_i | beta_i, lambda2 ~ GIG(omega - 1/2, omega*lambda2, beta_i^2).
VectorXd update_local_scales(const VectorXd& coeffs, const NormalGammaState& state,
                             Rng& rng);

/// Full-conditional update of the global scale:
/// lambda2 | locals ~ Gamma(omega*r + c0, rate c1 + (omega/2) * sum(locals)).
double update_global_scale(const VectorXd& local, double omega, double c0,
                           double c1, Rng& rng);

/// Convenience sweep: locals given coeffs, then the global given locals.
void update_normal_gamma(const VectorXd& coeffs, NormalGammaState& state, Rng& rng);

}  // namespace msfa
