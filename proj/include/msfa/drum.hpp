#pragma once

#include <vector>

#include "msfa/normal_gamma.hpp"
#include "msfa/rng.hpp"
#include "msfa/tvtp.hpp"

namespace msfa {

/// Observed state transitions with their (delay-aligned) covariates: one
/// multinomial observation per modeled period whose predecessor state is in
/// the sample.
struct TransitionObservations {
  std::vector<int> source;  // 1-based S_{t-1}
  std::vector<int> dest;    // 1-based S_t
  MatrixXd z;               // r x n covariate columns, Z_{t-d}

  int size() const { return static_cast<int>(source.size()); }
};

TransitionObservations collect_transitions(const StateSequence& states,
                                           const FactorPath& factors, int p, int d);

/// One partial-dRUM Gibbs update of the logit coefficients. Each non-baseline
/// destination category is updated as a block: the aggregated utility of the
/// competing categories enters as a known offset, the difference utility is
/// drawn from its sign-constrained logistic conditional, a mixture indicator
/// linearizes the logistic error, and the block (gamma_{c,1..H}, beta_c) is
/// drawn from the resulting heteroskedastic normal regression. Intercepts
/// carry the N(g0, G0) prior; slopes use the per-state normal-gamma local
/// variances when `slope_scales` is given, else the fixed prior variance.
/// A source state with no observations simply contributes no rows, so its
/// intercepts come from the prior.
TvtpCoefficients draw_mnl_coefficients(const TransitionObservations& obs,
                                       const TvtpCoefficients& current,
                                       const std::vector<NormalGammaState>* slope_scales,
                                       const PriorConfig& prior, Rng& rng);

}  // namespace msfa
