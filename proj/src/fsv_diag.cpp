#include "msfa/fsv_diag.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace msfa {

ExplainedVariance explained_variance_share(const FactorState& state) {
  const int m = state.n_series();
  const int T = state.n_periods();
  ExplainedVariance ev;
  ev.per_series = VectorXd::Zero(m);
  ev.per_time = VectorXd::Zero(T);
  for (int t = 0; t < T; ++t) {
    const VectorXd v = state.fac_logvar.col(t).array().exp();
    for (int i = 0; i < m; ++i) {
      const double common = state.loadings.row(i).array().square().matrix().dot(v);
      const double share = common / (common + std::exp(state.idio_logvar(i, t)));
      ev.per_series[i] += share;
      ev.per_time[t] += share;
    }
  }
  ev.overall = ev.per_series.sum() / (static_cast<double>(m) * T);
  ev.per_series /= T;
  ev.per_time /= m;
  return ev;
}

std::vector<std::vector<std::string>> top_loadings_report(
    const MatrixXd& loadings, const std::vector<std::string>& names, int k) {
  const int m = static_cast<int>(loadings.rows());
  const int r = static_cast<int>(loadings.cols());
  if (k > m) throw DimensionError("top_loadings_report: k exceeds series count");
  if (static_cast<int>(names.size()) != m)
    throw DimensionError("top_loadings_report: names/loadings size mismatch");
  std::vector<std::vector<std::string>> out(r);
  std::vector<int> idx(m);
  for (int j = 0; j < r; ++j) {
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
      return std::abs(loadings(a, j)) > std::abs(loadings(b, j));
    });
    out[j].reserve(k);
    for (int i = 0; i < k; ++i) out[j].push_back(names[idx[i]]);
  }
  return out;
}

std::vector<double> factor_count_criterion(const MatrixXd& series,
                                           const std::vector<int>& r_candidates) {
  const int m = static_cast<int>(series.rows());
  const int T = static_cast<int>(series.cols());
  const MatrixXd cov = series * series.transpose() / static_cast<double>(T);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(cov);
  VectorXd eig = es.eigenvalues().reverse();  // descending
  constexpr double kLog2Pi = 1.8378770664093454836;

  std::vector<double> out;
  out.reserve(r_candidates.size());
  for (int r : r_candidates) {
    if (r < 1 || r >= m)
      throw DimensionError("factor_count_criterion: candidates must satisfy 1 <= r < m");
    double logsum = 0.0;
    for (int j = 0; j < r; ++j) logsum += std::log(eig[j]);
    const double noise = eig.tail(m - r).sum() / (m - r);
    const double loglik =
        -0.5 * T * (m * kLog2Pi + logsum + (m - r) * std::log(noise) + m);
    const double n_params = m * r - 0.5 * r * (r - 1) + 1.0;
    out.push_back(-2.0 * loglik + n_params * std::log(static_cast<double>(T)));
  }
  return out;
}

FactorPath export_centered_factor_means(const std::vector<MatrixXd>& draws) {
  if (draws.empty()) throw DimensionError("export_centered_factor_means: no draws");
  MatrixXd mean = MatrixXd::Zero(draws[0].rows(), draws[0].cols());
  for (const auto& d : draws) mean += d;
  mean /= static_cast<double>(draws.size());
  FactorPath path;
  path.means = mean.rowwise().mean();
  path.values = mean.colwise() - path.means;
  return path;
}

}  // namespace msfa
