#include "msfa/drum.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace msfa {

namespace {

double log_sigmoid(double x) {
  return x > 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

// Draw w = eta + logistic noise conditional on its sign matching `positive`.
// Inverse-CDF on the truncated branch, written so both far tails stay finite.
double truncated_logistic(double eta, bool positive, Rng& rng) {
  const double u = rng.uniform();
  if (positive) {
    // V ~ U(F(0), 1) with F(0) = sigmoid(-eta); 1 - V = (1-u) * sigmoid(eta)
    const double log_one_minus_v = std::log1p(-u) + log_sigmoid(eta);
    const double log_v = std::log1p(-std::exp(log_one_minus_v));
    return eta + log_v - log_one_minus_v;
  }
  // V ~ U(0, F(0)); V = u * sigmoid(-eta)
  const double log_v = std::log(u) + log_sigmoid(-eta);
  const double log_one_minus_v = std::log1p(-std::exp(log_v));
  return eta + log_v - log_one_minus_v;
}

}  // namespace

TransitionObservations collect_transitions(const StateSequence& states,
                                           const FactorPath& factors, int p, int d) {
  const int n = states.length();
  const int r = factors.n_factors();
  TransitionObservations obs;
  if (n < 2) {
    obs.z.resize(r, 0);
    return obs;
  }
  // the first modeled period has an unobserved predecessor and is dropped
  obs.source.reserve(n - 1);
  obs.dest.reserve(n - 1);
  obs.z.resize(r, n - 1);
  for (int u = 1; u < n; ++u) {
    obs.source.push_back(states.states[u - 1]);
    obs.dest.push_back(states.states[u]);
    if (r > 0) {
      const int col = p + u - d;
      if (col < 0 || col >= factors.length())
        throw DimensionError("collect_transitions: covariate index out of range");
      obs.z.col(u - 1) = factors.values.col(col);
    }
  }
  return obs;
}

TvtpCoefficients draw_mnl_coefficients(const TransitionObservations& obs,
                                       const TvtpCoefficients& current,
                                       const std::vector<NormalGammaState>* slope_scales,
                                       const PriorConfig& prior, Rng& rng) {
  const int H = current.n_states();
  const int r = current.n_factors();
  const int n = obs.size();
  const int K = H + r;  // source dummies + slopes
  current.validate();
  if (slope_scales && static_cast<int>(slope_scales->size()) != H)
    throw DimensionError("draw_mnl_coefficients: need one scale group per state");

  TvtpCoefficients out = current;
  const auto& mix = logistic_mixture_table();
  const int n_mix = static_cast<int>(mix.size());
  std::vector<double> log_mix_norm(n_mix), inv2v(n_mix), logw(n_mix);
  for (int j = 0; j < n_mix; ++j) {
    log_mix_norm[j] = std::log(mix[j].weight) - 0.5 * std::log(mix[j].variance);
    inv2v[j] = 0.5 / mix[j].variance;
  }

  MatrixXd util(H, n);  // current utilities, refreshed after each block
  auto refresh_utilities = [&]() {
    for (int i = 0; i < n; ++i) {
      const int k = obs.source[i] - 1;
      for (int l = 0; l < H; ++l)
        util(l, i) = out.gamma(l, k) + (r > 0 ? out.beta.row(l).dot(obs.z.col(i)) : 0.0);
    }
  };
  refresh_utilities();

  VectorXd x(K);
  for (int c = 0; c < H; ++c) {
    if (c == out.h0 - 1) continue;

    MatrixXd Q = MatrixXd::Zero(K, K);
    VectorXd rhs = VectorXd::Zero(K);
    for (int k = 0; k < H; ++k) {
      Q(k, k) = 1.0 / prior.G0;
      rhs[k] = prior.g0 / prior.G0;
    }
    for (int j = 0; j < r; ++j) {
      const double v = slope_scales ? (*slope_scales)[c].local[j] : prior.beta_fixed_var;
      Q(H + j, H + j) = 1.0 / v;
    }

    for (int i = 0; i < n; ++i) {
      // aggregated utility of all competing categories
      double mx = -std::numeric_limits<double>::infinity();
      for (int l = 0; l < H; ++l)
        if (l != c) mx = std::max(mx, util(l, i));
      double s = 0.0;
      for (int l = 0; l < H; ++l)
        if (l != c) s += std::exp(util(l, i) - mx);
      const double log_lambda_rest = mx + std::log(s);

      const double eta = util(c, i) - log_lambda_rest;
      const double w = truncated_logistic(eta, obs.dest[i] == c + 1, rng);
      const double eps = w - eta;
      for (int j = 0; j < n_mix; ++j)
        logw[j] = log_mix_norm[j] - eps * eps * inv2v[j];
      const int comp = rng.categorical_log(logw);

      x.setZero();
      x[obs.source[i] - 1] = 1.0;
      if (r > 0) x.tail(r) = obs.z.col(i);
      const double weight = 1.0 / mix[comp].variance;
      const double resp = w + log_lambda_rest;
      Q.selfadjointView<Eigen::Lower>().rankUpdate(x, weight);
      rhs += x * (weight * resp);
    }

    Eigen::LLT<MatrixXd> llt(Q.selfadjointView<Eigen::Lower>());
    if (llt.info() != Eigen::Success)
      throw NumericalError("draw_mnl_coefficients: singular posterior precision");
    const VectorXd mean = llt.solve(rhs);
    const VectorXd coef = mean + llt.matrixU().solve(rng.normal_vector(K));

    for (int k = 0; k < H; ++k) out.gamma(c, k) = coef[k];
    if (r > 0) out.beta.row(c) = coef.tail(r).transpose();
    refresh_utilities();
  }
  return out;
}

}  // namespace msfa
