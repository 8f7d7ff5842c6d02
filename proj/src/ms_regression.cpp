#include "msfa/ms_regression.hpp"

#include <Eigen/Cholesky>

#include "msfa/panel.hpp"

namespace msfa {

RegimeParams draw_regime_regression(const VectorXd& y, int p, const StateSequence& S,
                                    const PriorConfig& prior, SwitchFlags flags,
                                    const RegimeParams& current, Rng& rng) {
  const int H = current.n_states();
  const int n = S.length();
  if (static_cast<int>(y.size()) - p != n)
    throw DimensionError("draw_regime_regression: state path length must be T - p");
  S.validate(H);

  // coefficient layout: intercept block (H entries or 1), then AR block
  // (H*p entries or p)
  const int n_mu = flags.mean ? H : 1;
  const int n_phi = flags.ar ? H * p : p;
  const int K = n_mu + n_phi;

  const LagDesign lag = p > 0 ? build_lag_design(y, p) : LagDesign{MatrixXd::Ones(n, 1), y};

  VectorXd prior_mean(K), prior_prec(K);
  for (int i = 0; i < n_mu; ++i) {
    prior_mean[i] = prior.m0;
    prior_prec[i] = 1.0 / prior.M0;
  }
  for (int i = 0; i < n_phi; ++i) {
    prior_mean[n_mu + i] = prior.r0;
    prior_prec[n_mu + i] = 1.0 / prior.R0;
  }

  MatrixXd Q = prior_prec.asDiagonal();
  VectorXd rhs = prior_prec.cwiseProduct(prior_mean);
  VectorXd row = VectorXd::Zero(K);
  for (int t = 0; t < n; ++t) {
    const int h = S.states[t] - 1;
    row.setZero();
    row[flags.mean ? h : 0] = 1.0;
    for (int j = 0; j < p; ++j)
      row[n_mu + (flags.ar ? h * p : 0) + j] = lag.design(t, 1 + j);
    const double w = 1.0 / current.sigma2[h];
    Q.selfadjointView<Eigen::Lower>().rankUpdate(row, w);
    rhs += row * (w * lag.response[t]);
  }
  Eigen::LLT<MatrixXd> llt(Q.selfadjointView<Eigen::Lower>());
  if (llt.info() != Eigen::Success)
    throw NumericalError("draw_regime_regression: singular posterior precision");
  const VectorXd mean = llt.solve(rhs);
  const VectorXd coef =
      mean + llt.matrixU().solve(rng.normal_vector(K));

  RegimeParams out;
  out.flags = flags;
  out.mu.resize(H);
  out.phi.resize(H, p);
  out.sigma2.resize(H);
  for (int h = 0; h < H; ++h) {
    out.mu[h] = coef[flags.mean ? h : 0];
    for (int j = 0; j < p; ++j) out.phi(h, j) = coef[n_mu + (flags.ar ? h * p : 0) + j];
  }

  // sigma2 given the freshly drawn coefficients
  VectorXd ssr = VectorXd::Zero(H);
  VectorXd count = VectorXd::Zero(H);
  for (int t = 0; t < n; ++t) {
    const int h = S.states[t] - 1;
    double fit = out.mu[h];
    for (int j = 0; j < p; ++j) fit += out.phi(h, j) * lag.design(t, 1 + j);
    const double e = lag.response[t] - fit;
    ssr[h] += e * e;
    count[h] += 1.0;
  }
  if (flags.var) {
    for (int h = 0; h < H; ++h)
      out.sigma2[h] =
          rng.inverse_gamma(prior.c0_sig + 0.5 * count[h], prior.d0_sig + 0.5 * ssr[h]);
  } else {
    const double s2 =
        rng.inverse_gamma(prior.c0_sig + 0.5 * n, prior.d0_sig + 0.5 * ssr.sum());
    out.sigma2.setConstant(s2);
  }
  return out;
}

}  // namespace msfa
