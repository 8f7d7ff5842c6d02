#include "msfa/tvtp.hpp"

#include <cmath>

namespace msfa {

void TvtpCoefficients::validate() const {
  const int H = n_states();
  if (gamma.cols() != H) throw DimensionError("TvtpCoefficients: gamma must be H x H");
  if (beta.rows() != H) throw DimensionError("TvtpCoefficients: beta must have H rows");
  if (h0 < 1 || h0 > H) throw ParameterError("TvtpCoefficients: baseline out of range");
  if (d < 0) throw ParameterError("TvtpCoefficients: delay must be nonnegative");
  if (gamma.row(h0 - 1).cwiseAbs().maxCoeff() != 0.0)
    throw ParameterError("TvtpCoefficients: baseline gamma row must be zero");
  if (beta.cols() > 0 && beta.row(h0 - 1).cwiseAbs().maxCoeff() != 0.0)
    throw ParameterError("TvtpCoefficients: baseline beta row must be zero");
}

TvtpCoefficients TvtpCoefficients::zero(int H, int r, int h0, int d) {
  TvtpCoefficients c;
  c.gamma = MatrixXd::Zero(H, H);
  c.beta = MatrixXd::Zero(H, r);
  c.h0 = h0;
  c.d = d;
  return c;
}

void FactorPath::validate() const {
  if (means.size() != values.rows())
    throw DimensionError("FactorPath: means/values size mismatch");
  for (int i = 0; i < values.rows(); ++i)
    if (std::abs(values.row(i).mean()) > 1e-8)
      throw ParameterError("FactorPath: row not centered");
}

MatrixXd transition_matrix(const TvtpCoefficients& coeffs, const VectorXd& z) {
  const int H = coeffs.n_states();
  if (z.size() != coeffs.n_factors())
    throw DimensionError("transition_matrix: covariate length mismatch");
  const VectorXd slope = coeffs.beta * z;  // per destination
  MatrixXd out(H, H);
  for (int k = 0; k < H; ++k) {
    double mx = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < H; ++j) mx = std::max(mx, coeffs.gamma(j, k) + slope[j]);
    double norm = 0.0;
    for (int j = 0; j < H; ++j) {
      out(j, k) = std::exp(coeffs.gamma(j, k) + slope[j] - mx);
      norm += out(j, k);
    }
    out.col(k) /= norm;
  }
  return out;
}

TransitionPath build_transition_path(const TvtpCoefficients& coeffs,
                                     const FactorPath& factors, int T, int p) {
  const int r = coeffs.n_factors();
  if (r > 0 && factors.length() < T)
    throw DimensionError("build_transition_path: factor path shorter than sample");
  if (r > 0 && p + 1 - coeffs.d < 1)
    throw DimensionError("build_transition_path: delay reaches before the sample start");
  TransitionPath path;
  path.matrices.reserve(T - p);
  const VectorXd none(0);
  for (int t = p + 1; t <= T; ++t) {
    const VectorXd z = r > 0 ? VectorXd(factors.values.col(t - 1 - coeffs.d)) : none;
    path.matrices.push_back(transition_matrix(coeffs, z));
  }
  return path;
}

const std::vector<MixtureComponent>& logistic_mixture_table() {
  // KL-optimal 6-component fit to the standard logistic; raw published
  // weights sum to 1.0000005, normalized here once.
  static const std::vector<MixtureComponent> table = [] {
    const double w[6] = {0.018446, 0.17268, 0.37393, 0.31697, 0.10890, 0.0090745};
    const double v[6] = {0.68159, 1.2419, 2.2388, 4.0724, 7.4371, 13.772};
    double sum = 0.0;
    for (double x : w) sum += x;
    std::vector<MixtureComponent> t(6);
    for (int i = 0; i < 6; ++i) t[i] = {w[i] / sum, v[i]};
    return t;
  }();
  return table;
}

}  // namespace msfa
