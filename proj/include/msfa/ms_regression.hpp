#pragma once

#include "msfa/rng.hpp"
#include "msfa/types.hpp"

namespace msfa {

/// Gibbs update of the switching AR block given the state path: (mu, phi)
/// jointly from the conjugate normal conditional (weighted by the current
/// state variances), then sigma2 from its inverse-gamma conditional. Shared
/// blocks pool all observations; a switching state with no assigned
/// observations falls back to its prior.
RegimeParams draw_regime_regression(const VectorXd& y, int p, const StateSequence& S,
                                    const PriorConfig& prior, SwitchFlags flags,
                                    const RegimeParams& current, Rng& rng);

}  // namespace msfa
