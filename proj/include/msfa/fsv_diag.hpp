#pragma once

#include <string>
#include <vector>

#include "msfa/fsv.hpp"
#include "msfa/tvtp.hpp"
#include "msfa/types.hpp"

namespace msfa {

/// Share of each series' conditional variance explained by the common
/// factors, (Lambda V_t Lambda')_ii over the total, averaged as named.
struct ExplainedVariance {
  double overall = 0.0;
  VectorXd per_series;  // m, averaged over time
  VectorXd per_time;    // T, averaged over series
};

ExplainedVariance explained_variance_share(const FactorState& state);

/// Per factor, the k series names ranked by absolute loading, ties broken
/// by series index.
std::vector<std::vector<std::string>> top_loadings_report(
    const MatrixXd& loadings, const std::vector<std::string>& names, int k);

/// BIC-style criterion per candidate factor count, from the profile
/// likelihood of the homoskedastic static factor approximation (probabilistic
/// PCA). Smaller is better; a model-selection heuristic only.
std::vector<double> factor_count_criterion(const MatrixXd& series,
                                           const std::vector<int>& r_candidates);

/// Element-wise posterior mean over retained factor draws, then each factor
/// series centered by its own time mean (recorded in the result).
FactorPath export_centered_factor_means(const std::vector<MatrixXd>& draws);

}  // namespace msfa
