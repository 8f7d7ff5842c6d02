#pragma once

#include <vector>

#include "msfa/ms_filter.hpp"
#include "msfa/types.hpp"

namespace msfa {

/// Multinomial-logit transition coefficients. `gamma` is indexed
/// (destination, source), `beta` (destination, factor); the baseline
/// destination's rows are exactly zero and slopes are shared across sources.
struct TvtpCoefficients {
  MatrixXd gamma;  // H x H intercepts
  MatrixXd beta;   // H x r slopes
  int h0 = 1;      // 1-based baseline destination
  int d = 0;       // covariate delay

  int n_states() const { return static_cast<int>(gamma.rows()); }
  int n_factors() const { return static_cast<int>(beta.cols()); }
  void validate() const;
  static TvtpCoefficients zero(int H, int r, int h0, int d);
};

/// Centered covariate series driving the transition probabilities, with the
/// removed per-series means retained.
struct FactorPath {
  MatrixXd values;  // r x T, rows mean zero
  VectorXd means;   // r

  int n_factors() const { return static_cast<int>(values.rows()); }
  int length() const { return static_cast<int>(values.cols()); }
  void validate() const;
};

/// One transition matrix for covariate value z: entry (j, k) =
/// exp(gamma_jk + beta_j'z) normalized over destinations j, computed with
/// max subtraction so large coefficients cannot overflow.
MatrixXd transition_matrix(const TvtpCoefficients& coeffs, const VectorXd& z);

/// Transition matrices for every usable period t = p+1..T, each built from
/// the covariate at t - d. Throws if the delay reaches before the sample.
TransitionPath build_transition_path(const TvtpCoefficients& coeffs,
                                     const FactorPath& factors, int T, int p);

struct MixtureComponent {
  double weight;
  double variance;
};

/// Six-component normal scale mixture approximating the standard logistic
/// distribution (Fruhwirth-Schnatter & Fruhwirth 2010), weights normalized
/// to sum exactly to one.
const std::vector<MixtureComponent>& logistic_mixture_table();

}  // namespace msfa
