#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "msfa/drum.hpp"
#include "msfa/fsv.hpp"
#include "msfa/identification.hpp"
#include "msfa/ms_filter.hpp"
#include "msfa/tvtp.hpp"
#include "msfa/types.hpp"

namespace msfa {

/// Where the transition-logit covariates come from: none (constant
/// transition probabilities), the standardized panel rows themselves, or
/// centered posterior-mean factors from a first-stage factor-SV run.
enum class CovariateSource { none, panel, factors };

struct EstimationConfig {
  int H = 2;
  int p = 1;
  int r = 0;   // factor count (factors mode)
  int h0 = 1;  // baseline state
  int d = 0;   // covariate delay
  SwitchFlags flags{true, false, false};
  CovariateSource covariates = CovariateSource::none;
  bool use_ng = false;  // normal-gamma shrinkage on the logit slopes
  ChainLengths msar{2000, 5000, 1};
  ChainLengths factor_stage{1000, 1000, 1};
  PriorConfig prior;
  OrderingRule ordering;
  std::uint64_t seed = 1;

  void validate() const;
};

struct FactorStageSummary {
  bool ran = false;
  MatrixXd mean_loadings;
  double ev_overall = 0.0;
  VectorXd ev_series;
  VectorXd ev_time;
};

/// Retained posterior draws of the switching-AR stage plus everything the
/// reporting layer needs. `two_step` flags that covariate factors were
/// estimated in a separate first stage, so intervals here do not carry the
/// factor-estimation uncertainty.
struct DrawStore {
  std::vector<RegimeParams> regimes;
  std::vector<TvtpCoefficients> tvtp;
  std::vector<StateSequence> states;
  std::vector<std::vector<NormalGammaState>> slope_scales;  // per state, when NG on
  std::vector<double> loglik;
  FactorPath covariates;  // what stage 2 conditioned on (r x T; empty if none)
  FactorStageSummary factor_stage;
  int H = 0, p = 0, r = 0;
  ChainLengths lengths;
  std::uint64_t seed = 0;
  bool two_step = false;

  int size() const { return static_cast<int>(regimes.size()); }
};

/// Full two-step estimation: optional factor stage, then the switching-AR
/// Gibbs sweep (state classification by FFBS, regime regression, logit
/// coefficients by partial dRUM, shrinkage scales, identification
/// relabeling), storing post-burn-in draws at the thinning stride. Aborts
/// with the failing sweep index if the log-likelihood turns non-finite.
DrawStore run_estimation(const TimePanel& panel, const EstimationConfig& config, Rng& rng);

struct SummaryRow {
  std::string name;
  double median = 0.0;
  double lo = 0.0;  // HPD bounds
  double hi = 0.0;
};

/// Posterior median and highest-posterior-density interval (minimal-width
/// contiguous window of sorted draws) per scalar parameter.
std::vector<SummaryRow> summarize(const DrawStore& store, double hpd_level);

/// Median and HPD interval of one scalar draw vector.
SummaryRow summarize_scalar(std::vector<double> draws, double hpd_level,
                            const std::string& name);

/// Empirical state frequencies across retained draws, (T-p) x H, rows
/// summing to one.
MatrixXd smoothed_state_probabilities(const DrawStore& store);

/// Merge chains run with different seeds (draws concatenated in chain order).
DrawStore merge_draw_stores(std::vector<DrawStore> stores);

}  // namespace msfa
