#pragma once

#include <array>
#include <vector>

#include "msfa/normal_gamma.hpp"
#include "msfa/rng.hpp"
#include "msfa/types.hpp"

namespace msfa {

/// Log-variance AR(1) parameters. Idiosyncratic processes are centered
/// (free mu); factor processes fix mu = 0 to identify the factor scale.
struct SvParams {
  double mu = 0.0;
  double phi = 0.9;
  double sigma2 = 0.1;
};

/// Full latent state of the sparse factor model with stochastic volatility:
/// loadings have zeros above the diagonal, every variance process is a
/// stationary log AR(1).
struct FactorState {
  MatrixXd loadings;     // m x r, loadings(i, j) = 0 for j > i
  MatrixXd factors;      // r x T
  MatrixXd idio_logvar;  // m x T
  MatrixXd fac_logvar;   // r x T
  std::vector<SvParams> idio_sv;  // m
  std::vector<SvParams> fac_sv;   // r (mu pinned to 0)

  int n_series() const { return static_cast<int>(loadings.rows()); }
  int n_factors() const { return static_cast<int>(loadings.cols()); }
  int n_periods() const { return static_cast<int>(factors.cols()); }
  /// active (unconstrained) entries in loadings row i
  int row_active(int i) const { return std::min(i + 1, n_factors()); }
  void validate() const;
};

struct LogChi2Component {
  double weight;
  double mean;
  double variance;
};

/// Ten-component normal mixture approximating the log chi-square(1)
/// distribution of log(e^2), e ~ N(0,1) (Omori, Chib, Shephard & Nakajima
/// 2007 constants).
const std::array<LogChi2Component, 10>& log_chi2_mixture();

/// Factors at each t from their conditional normal given loadings and both
/// variance processes; independent across t.
void draw_factors(const MatrixXd& x, FactorState& state, Rng& rng);

/// Unconstrained loadings rows from their conditional normal given factors
/// and idiosyncratic variances, with per-element normal-gamma prior
/// variances. Constrained entries stay exactly zero.
void draw_loadings(const MatrixXd& x, FactorState& state,
                   const std::vector<NormalGammaState>& row_scales, Rng& rng);

/// One auxiliary-mixture update of a log-variance path: mixture indicators
/// from the current path, then an exact forward-filter backward-draw of the
/// linearized Gaussian state space. residual_t ~ N(0, exp(path_t)).
VectorXd draw_logvariance_path(const VectorXd& residuals, const SvParams& params,
                               const VectorXd& path, Rng& rng);

/// Updates (mu, phi, sigma2) of a log-variance process given its path:
/// conjugate normal for mu (centered processes only), Metropolis step for
/// phi under the stretched-beta prior, GIG draw for sigma2 under the
/// Gamma(1/2, 1/(2 B_sigma)) prior.
SvParams draw_sv_params(const VectorXd& path, const SvParams& current,
                        const PriorConfig& prior, bool centered, Rng& rng,
                        double phi_step = 0.1, bool* phi_accepted = nullptr);

/// Retained output of the factor-model stage.
struct FsvDraws {
  std::vector<MatrixXd> factor_draws;  // retained r x T paths
  MatrixXd mean_loadings;              // m x r posterior mean
  double ev_overall = 0.0;             // explained-variance share averages
  VectorXd ev_series;
  VectorXd ev_time;
};

/// Run the full factor-SV Gibbs sampler on a standardized panel. Sweep
/// order: loadings, factors, idiosyncratic volatilities, factor
/// volatilities, their parameters, then the shrinkage hierarchy. phi
/// proposal steps adapt toward 0.44 acceptance during burn-in only.
FsvDraws run_factor_stage(const MatrixXd& series, int r, const PriorConfig& prior,
                          ChainLengths lengths, Rng& rng);

}  // namespace msfa
