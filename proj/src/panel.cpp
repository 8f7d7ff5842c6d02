#include "msfa/panel.hpp"

#include <cmath>

namespace msfa {

void TimePanel::validate() const {
  const int m = n_series();
  const int T = n_periods();
  if (m < 1 || T < 2) throw DimensionError("TimePanel: need m >= 1 and T >= 2");
  if (static_cast<int>(names.size()) != m)
    throw DimensionError("TimePanel: names/series size mismatch");
  if (!time_index.empty() && static_cast<int>(time_index.size()) != T)
    throw DimensionError("TimePanel: time_index/series size mismatch");
  if (target.size() != 0 && target.size() != T)
    throw DimensionError("TimePanel: target length must equal T");
  if (!series.allFinite()) throw NumericalError("TimePanel: non-finite entry");
  for (int i = 0; i < m; ++i) {
    const double mean = series.row(i).mean();
    const double sd = std::sqrt(series.row(i).array().square().mean() - mean * mean);
    if (std::abs(mean) > 1e-8 || std::abs(sd - 1.0) > 1e-8)
      throw NumericalError("TimePanel: series " + names[i] + " not standardized");
  }
}

void RegimeParams::validate() const {
  const int H = n_states();
  if (H < 1) throw DimensionError("RegimeParams: need at least one state");
  if (phi.rows() != H || sigma2.size() != H)
    throw DimensionError("RegimeParams: inconsistent state dimension");
  for (int h = 0; h < H; ++h)
    if (!(sigma2[h] > 0.0)) throw ParameterError("RegimeParams: sigma2 must be positive");
  auto rows_equal = [&](const auto& get) {
    for (int h = 1; h < H; ++h)
      if (get(h) != get(0)) return false;
    return true;
  };
  if (!flags.mean && !rows_equal([&](int h) { return mu[h]; }))
    throw ParameterError("RegimeParams: mean marked shared but differs across states");
  if (!flags.ar && H > 1 && (phi.rowwise() - phi.row(0)).cwiseAbs().maxCoeff() != 0.0)
    throw ParameterError("RegimeParams: AR block marked shared but differs across states");
  if (!flags.var && !rows_equal([&](int h) { return sigma2[h]; }))
    throw ParameterError("RegimeParams: variance marked shared but differs across states");
}

void StateSequence::validate(int n_states) const {
  for (int s : states)
    if (s < 1 || s > n_states) throw ParameterError("StateSequence: label out of range");
}

void PriorConfig::validate() const {
  auto pos = [](double v, const char* name) {
    if (!(v > 0.0)) throw ConfigError(std::string("PriorConfig: ") + name + " must be positive");
  };
  pos(M0, "M0");
  pos(R0, "R0");
  pos(c0_sig, "c0_sig");
  pos(d0_sig, "d0_sig");
  pos(G0, "G0");
  pos(omega_psi, "omega_psi");
  pos(c_psi0, "c_psi0");
  pos(c_psi1, "c_psi1");
  pos(omega_tau, "omega_tau");
  pos(c_tau0, "c_tau0");
  pos(c_tau1, "c_tau1");
  pos(b0, "b0");
  pos(b1, "b1");
  pos(B_sigma, "B_sigma");
  pos(M_g, "M_g");
  pos(beta_fixed_var, "beta_fixed_var");
}

LagDesign build_lag_design(const VectorXd& y, int p) {
  const int T = static_cast<int>(y.size());
  if (p < 1) throw DimensionError("build_lag_design: lag order must be positive");
  if (T <= p) throw DimensionError("build_lag_design: series length must exceed lag order");
  LagDesign out;
  out.design.resize(T - p, p + 1);
  out.response.resize(T - p);
  for (int t = p; t < T; ++t) {
    out.design(t - p, 0) = 1.0;
    for (int j = 1; j <= p; ++j) out.design(t - p, j) = y[t - j];
    out.response[t - p] = y[t];
  }
  return out;
}

TimePanel standardize_panel(const MatrixXd& raw, std::vector<std::string> names,
                            std::vector<std::string> time_index) {
  const int m = static_cast<int>(raw.rows());
  const int T = static_cast<int>(raw.cols());
  if (m < 1 || T < 2) throw DimensionError("standardize_panel: need m >= 1 and T >= 2");
  if (names.empty()) {
    names.resize(m);
    for (int i = 0; i < m; ++i) names[i] = "series" + std::to_string(i + 1);
  }
  TimePanel panel;
  panel.series.resize(m, T);
  panel.original_mean.resize(m);
  panel.original_sd.resize(m);
  for (int i = 0; i < m; ++i) {
    const double mean = raw.row(i).mean();
    const double var = raw.row(i).array().square().mean() - mean * mean;
    if (!(var > 0.0))
      throw ParameterError("standardize_panel: zero-variance series " + names[i]);
    double sd = std::sqrt(var);
    double center = mean;
    // Exact pass-through for rows that are already standardized, so the
    // operation is idempotent to the bit and exported panels re-ingest
    // unchanged.
    if (std::abs(mean) <= 1e-9 && std::abs(sd - 1.0) <= 1e-9) {
      center = 0.0;
      sd = 1.0;
    }
    panel.series.row(i) = (raw.row(i).array() - center) / sd;
    panel.original_mean[i] = center;
    panel.original_sd[i] = sd;
  }
  panel.names = std::move(names);
  panel.time_index = std::move(time_index);
  return panel;
}

}  // namespace msfa
