#include "msfa/ms_filter.hpp"

#include <cmath>
#include <string>

namespace msfa {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

void TransitionPath::validate() const {
  for (const auto& m : matrices) {
    if (m.rows() != m.cols()) throw DimensionError("TransitionPath: matrices must be square");
    for (int k = 0; k < m.cols(); ++k) {
      if (std::abs(m.col(k).sum() - 1.0) > 1e-10)
        throw ParameterError("TransitionPath: column does not sum to 1");
      for (int j = 0; j < m.rows(); ++j)
        if (!(m(j, k) >= 0.0) || !(m(j, k) <= 1.0))
          throw ParameterError("TransitionPath: entry outside [0,1]");
    }
  }
}

void FilterOutput::validate() const {
  if (!std::isfinite(loglik)) throw NumericalError("FilterOutput: non-finite log-likelihood");
  for (int t = 0; t < filtered.rows(); ++t) {
    if (std::abs(filtered.row(t).sum() - 1.0) > 1e-10 ||
        std::abs(predicted.row(t).sum() - 1.0) > 1e-10)
      throw NumericalError("FilterOutput: probabilities do not sum to 1");
  }
}

VectorXd regime_log_density(double y_t, const VectorXd& lags, const RegimeParams& params) {
  const int H = params.n_states();
  const int p = params.ar_order();
  if (lags.size() != p) throw DimensionError("regime_log_density: lag vector length != p");
  VectorXd out(H);
  for (int h = 0; h < H; ++h) {
    double mean = params.mu[h];
    for (int j = 0; j < p; ++j) mean += params.phi(h, j) * lags[j];
    const double resid = y_t - mean;
    out[h] = -0.5 * (kLog2Pi + std::log(params.sigma2[h]) + resid * resid / params.sigma2[h]);
  }
  return out;
}

VectorXd regime_density(double y_t, const VectorXd& lags, const RegimeParams& params) {
  return regime_log_density(y_t, lags, params).array().exp();
}

FilterOutput hamilton_filter(const VectorXd& y, int p, const RegimeParams& params,
                             const TransitionPath& path, const VectorXd& init) {
  const int T = static_cast<int>(y.size());
  const int H = params.n_states();
  const int n = T - p;
  if (n < 1) throw DimensionError("hamilton_filter: series shorter than lag order");
  if (path.length() != n)
    throw DimensionError("hamilton_filter: path length must equal T - p");
  if (init.size() != H || std::abs(init.sum() - 1.0) > 1e-8)
    throw ParameterError("hamilton_filter: init must be a distribution over H states");

  FilterOutput out;
  out.filtered.resize(n, H);
  out.predicted.resize(n, H);
  out.loglik = 0.0;

  VectorXd prev = init;
  VectorXd lags(p);
  for (int t = 0; t < n; ++t) {
    const VectorXd pred = path.matrices[t] * prev;
    for (int j = 0; j < p; ++j) lags[j] = y[p + t - 1 - j];
    const VectorXd logdens = regime_log_density(y[p + t], lags, params);

    // update in log space, scaled by the row maximum
    VectorXd logpost(H);
    double mx = -std::numeric_limits<double>::infinity();
    for (int h = 0; h < H; ++h) {
      logpost[h] = (pred[h] > 0.0 ? std::log(pred[h]) : -std::numeric_limits<double>::infinity()) +
                   logdens[h];
      mx = std::max(mx, logpost[h]);
    }
    if (!std::isfinite(mx))
      throw NumericalError("hamilton_filter: all state densities underflowed at t=" +
                           std::to_string(p + t + 1));
    double norm = 0.0;
    for (int h = 0; h < H; ++h) norm += std::exp(logpost[h] - mx);
    out.loglik += mx + std::log(norm);
    for (int h = 0; h < H; ++h) out.filtered(t, h) = std::exp(logpost[h] - mx) / norm;
    out.predicted.row(t) = pred.transpose();
    prev = out.filtered.row(t).transpose();
  }
  return out;
}

StateSequence ffbs_sample(const FilterOutput& filter, const TransitionPath& path,
                          Rng& rng) {
  const int n = static_cast<int>(filter.filtered.rows());
  const int H = static_cast<int>(filter.filtered.cols());
  if (path.length() != n)
    throw DimensionError("ffbs_sample: filter/path length mismatch");

  StateSequence seq;
  seq.states.resize(n);
  std::vector<double> w(H);
  for (int h = 0; h < H; ++h) w[h] = filter.filtered(n - 1, h);
  seq.states[n - 1] = rng.categorical(w) + 1;
  for (int t = n - 2; t >= 0; --t) {
    const int next = seq.states[t + 1] - 1;
    for (int h = 0; h < H; ++h)
      w[h] = filter.filtered(t, h) * path.matrices[t + 1](next, h);
    seq.states[t] = rng.categorical(w) + 1;
  }
  return seq;
}

}  // namespace msfa
