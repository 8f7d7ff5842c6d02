#pragma once

#include <vector>

#include "msfa/rng.hpp"
#include "msfa/types.hpp"

namespace msfa {

/// Sequence of H x H transition matrices, one per modeled period. Entry
/// (j, k) of matrix t is P(S_t = j | S_{t-1} = k), so every column sums to 1.
struct TransitionPath {
  std::vector<MatrixXd> matrices;

  int length() const { return static_cast<int>(matrices.size()); }
  int n_states() const { return matrices.empty() ? 0 : static_cast<int>(matrices[0].rows()); }
  void validate() const;
};

/// Filtered and one-step-ahead state probabilities plus the marginal
/// log-likelihood from the predict-update recursion.
struct FilterOutput {
  MatrixXd filtered;   // (T-p) x H rows summing to 1
  MatrixXd predicted;  // (T-p) x H rows summing to 1
  double loglik = 0.0;

  void validate() const;
};

/// Per-state conditional density of y_t given p lagged values,
/// N(mu_h + phi_h'lags, sigma2_h). lags[0] is y_{t-1}.
VectorXd regime_density(double y_t, const VectorXd& lags, const RegimeParams& params);
VectorXd regime_log_density(double y_t, const VectorXd& lags, const RegimeParams& params);

/// Hamilton filter over the usable sample t = p+1..T. `init` is the state
/// distribution at the presample boundary; `path` must have one matrix per
/// usable period. Throws NumericalError naming t if every state's density
/// underflows to zero.
FilterOutput hamilton_filter(const VectorXd& y, int p, const RegimeParams& params,
                             const TransitionPath& path, const VectorXd& init);

/// Joint draw of the state path given filter output: the last state from the
/// final filtered row, then backwards S_t with weight filtered_t(h) *
/// xi_{S_{t+1}, h, t+1}. Labels are 1-based.
StateSequence ffbs_sample(const FilterOutput& filter, const TransitionPath& path,
                          Rng& rng);

}  // namespace msfa
