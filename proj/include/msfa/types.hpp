#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace msfa {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Eigen::VectorXi;

class DimensionError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class ParameterError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class NumericalError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Standardized covariate panel (m series x T periods) plus the modeled
/// target series. Covariates are centered and scaled on ingestion; the
/// per-series means/sds that were removed are kept so the transform is
/// reversible. Immutable by convention once built.
struct TimePanel {
  MatrixXd series;                      // m x T, each row mean 0, sd 1
  std::vector<std::string> names;       // m series identifiers
  std::vector<std::string> time_index;  // T period labels
  VectorXd target;                      // y_t, length T (not standardized)
  VectorXd original_mean;               // m, removed means
  VectorXd original_sd;                 // m, removed sds (denominator T)

  int n_series() const { return static_cast<int>(series.rows()); }
  int n_periods() const { return static_cast<int>(series.cols()); }
  void validate() const;
};

/// Which parameter blocks of the switching AR model are state-dependent.
struct SwitchFlags {
  bool mean = true;
  bool ar = false;
  bool var = false;
};

/// State-dependent AR(p) parameters. Row h of `phi` holds the lag
/// coefficients of state h; non-switching blocks are identical across rows.
struct RegimeParams {
  VectorXd mu;      // H intercepts
  MatrixXd phi;     // H x p lag coefficients
  VectorXd sigma2;  // H innovation variances, all > 0
  SwitchFlags flags;

  int n_states() const { return static_cast<int>(mu.size()); }
  int ar_order() const { return static_cast<int>(phi.cols()); }
  void validate() const;
};

/// Hidden state labels, 1-based in {1,...,H}, one per modeled period.
struct StateSequence {
  std::vector<int> states;

  int length() const { return static_cast<int>(states.size()); }
  void validate(int n_states) const;
};

/// MCMC chain schedule: draws kept after burn-in, at the thinning stride.
struct ChainLengths {
  int burnin = 1000;
  int retained = 2000;
  int thin = 1;

  void validate() const {
    if (burnin < 0 || retained < 1 || thin < 1)
      throw ConfigError("ChainLengths: need burnin >= 0, retained >= 1, thin >= 1");
  }
};

/// Hyperparameters for every prior in the model. Variance/scale/shape
/// entries must be strictly positive.
struct PriorConfig {
  // switching AR block: mu_h ~ N(m0, M0), phi_jh ~ N(r0, R0),
  // sigma2_h ~ IG(c0_sig, d0_sig)
  double m0 = 0.0;
  double M0 = 10.0;
  double r0 = 0.0;
  double R0 = 4.0;
  double c0_sig = 1.0;
  double d0_sig = 1.0;
  // transition-logit intercepts: gamma ~ N(g0, G0)
  double g0 = 0.0;
  double G0 = 4.0;
  // normal-gamma hierarchy on the logit slopes
  double omega_psi = 0.6;
  double c_psi0 = 0.01;
  double c_psi1 = 0.01;
  // normal-gamma hierarchy on the factor loadings (per-row globals)
  double omega_tau = 1.0;
  double c_tau0 = 1.0;
  double c_tau1 = 1.0;
  // log-variance AR(1) processes: (phi+1)/2 ~ Beta(b0, b1),
  // sigma2 ~ Gamma(1/2, rate 1/(2*B_sigma)), level mu_g ~ N(0, M_g)
  double b0 = 20.0;
  double b1 = 1.5;
  double B_sigma = 1.0;
  double M_g = 100.0;
  // slope prior variance when the normal-gamma layer is switched off
  double beta_fixed_var = 4.0;

  void validate() const;
};

}  // namespace msfa
