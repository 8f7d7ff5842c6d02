#include "msfa/fsv.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "msfa/fsv_diag.hpp"
#include "msfa/gig.hpp"

namespace msfa {

namespace {
constexpr double kLogVarOffset = 1e-8;  // guards log(residual^2) at zero
}

void FactorState::validate() const {
  const int m = n_series();
  const int r = n_factors();
  const int T = n_periods();
  if (idio_logvar.rows() != m || idio_logvar.cols() != T ||
      fac_logvar.rows() != r || fac_logvar.cols() != T || factors.rows() != r)
    throw DimensionError("FactorState: inconsistent dimensions");
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < r; ++j)
      if (loadings(i, j) != 0.0)
        throw ParameterError("FactorState: constrained loading entry is nonzero");
  auto check_sv = [](const SvParams& sv) {
    if (!(std::abs(sv.phi) < 1.0)) throw ParameterError("FactorState: |phi| must be < 1");
    if (!(sv.sigma2 > 0.0)) throw ParameterError("FactorState: sigma2 must be positive");
  };
  for (const auto& sv : idio_sv) check_sv(sv);
  for (const auto& sv : fac_sv) check_sv(sv);
}

const std::array<LogChi2Component, 10>& log_chi2_mixture() {
  static const std::array<LogChi2Component, 10> table = {{
      {0.00609, 1.92677, 0.11265},
      {0.04775, 1.34744, 0.17788},
      {0.13057, 0.73504, 0.26768},
      {0.20674, 0.02266, 0.40611},
      {0.22715, -0.85173, 0.62699},
      {0.18842, -1.97278, 0.98583},
      {0.12047, -3.46788, 1.57469},
      {0.05591, -5.55246, 2.54498},
      {0.01575, -8.68384, 4.16591},
      {0.00115, -14.65000, 7.33342},
  }};
  return table;
}

void draw_factors(const MatrixXd& x, FactorState& state, Rng& rng) {
  const int r = state.n_factors();
  const int T = state.n_periods();
  if (x.cols() != T || x.rows() != state.n_series())
    throw DimensionError("draw_factors: panel/state dimension mismatch");
  MatrixXd Q(r, r);
  VectorXd rhs(r);
  for (int t = 0; t < T; ++t) {
    const VectorXd wu = (-state.idio_logvar.col(t)).array().exp();  // 1/U_t
    const MatrixXd lw = state.loadings.transpose() * wu.asDiagonal();
    Q.noalias() = lw * state.loadings;
    Q.diagonal() += (-state.fac_logvar.col(t)).array().exp().matrix();
    rhs.noalias() = lw * x.col(t);
    Eigen::LLT<MatrixXd> llt(Q);
    if (llt.info() != Eigen::Success)
      throw NumericalError("draw_factors: singular precision");
    state.factors.col(t) = llt.solve(rhs) + llt.matrixU().solve(rng.normal_vector(r));
  }
}

void draw_loadings(const MatrixXd& x, FactorState& state,
                   const std::vector<NormalGammaState>& row_scales, Rng& rng) {
  const int m = state.n_series();
  const int T = state.n_periods();
  if (static_cast<int>(row_scales.size()) != m)
    throw DimensionError("draw_loadings: need one scale group per series");
  for (int i = 0; i < m; ++i) {
    const int a = state.row_active(i);
    if (row_scales[i].local.size() != a)
      throw DimensionError("draw_loadings: local scale count mismatch");
    MatrixXd Q = MatrixXd::Zero(a, a);
    for (int j = 0; j < a; ++j) Q(j, j) = 1.0 / row_scales[i].local[j];
    VectorXd rhs = VectorXd::Zero(a);
    for (int t = 0; t < T; ++t) {
      const double w = std::exp(-state.idio_logvar(i, t));
      const VectorXd z = state.factors.col(t).head(a);
      Q.selfadjointView<Eigen::Lower>().rankUpdate(z, w);
      rhs += z * (w * x(i, t));
    }
    Eigen::LLT<MatrixXd> llt(Q.selfadjointView<Eigen::Lower>());
    if (llt.info() != Eigen::Success)
      throw NumericalError("draw_loadings: singular precision");
    const VectorXd row = llt.solve(rhs) + llt.matrixU().solve(rng.normal_vector(a));
    state.loadings.row(i).setZero();
    state.loadings.row(i).head(a) = row.transpose();
  }
}

VectorXd draw_logvariance_path(const VectorXd& residuals, const SvParams& params,
                               const VectorXd& path, Rng& rng) {
  const int T = static_cast<int>(residuals.size());
  if (path.size() != T)
    throw DimensionError("draw_logvariance_path: path/residual length mismatch");
  if (!(std::abs(params.phi) < 1.0))
    throw ParameterError("draw_logvariance_path: |phi| must be < 1");

  const auto& mix = log_chi2_mixture();
  const int n_mix = static_cast<int>(mix.size());
  std::array<double, 10> logw, lognorm, inv2v;
  for (int j = 0; j < n_mix; ++j) {
    lognorm[j] = std::log(mix[j].weight) - 0.5 * std::log(mix[j].variance);
    inv2v[j] = 0.5 / mix[j].variance;
  }

  // mixture indicators given the current path
  VectorXd obs_mean(T), obs_var(T);
  for (int t = 0; t < T; ++t) {
    const double ystar = std::log(residuals[t] * residuals[t] + kLogVarOffset);
    const double e = ystar - path[t];
    for (int j = 0; j < n_mix; ++j) {
      const double d = e - mix[j].mean;
      logw[j] = lognorm[j] - d * d * inv2v[j];
    }
    const int comp = rng.categorical_log(logw);
    obs_mean[t] = ystar - mix[comp].mean;
    obs_var[t] = mix[comp].variance;
  }

  // forward filter on alpha_t = path_t, obs_mean_t = alpha_t + N(0, obs_var_t)
  const double mu = params.mu;
  const double phi = params.phi;
  const double s2 = params.sigma2;
  VectorXd fm(T), fv(T);
  double pm = mu;
  double pv = s2 / (1.0 - phi * phi);
  for (int t = 0; t < T; ++t) {
    const double k = pv / (pv + obs_var[t]);
    fm[t] = pm + k * (obs_mean[t] - pm);
    fv[t] = (1.0 - k) * pv;
    pm = mu + phi * (fm[t] - mu);
    pv = phi * phi * fv[t] + s2;
  }

  // backward draw
  VectorXd out(T);
  out[T - 1] = rng.normal(fm[T - 1], std::sqrt(fv[T - 1]));
  for (int t = T - 2; t >= 0; --t) {
    const double denom = phi * phi * fv[t] + s2;
    const double g = fv[t] * phi / denom;
    const double mean = fm[t] + g * (out[t + 1] - mu - phi * (fm[t] - mu));
    const double var = fv[t] - g * phi * fv[t];
    out[t] = rng.normal(mean, std::sqrt(var));
  }
  return out;
}

namespace {

double sv_phi_log_target(const VectorXd& path, double mu, double phi, double s2,
                         double b0, double b1) {
  const int T = static_cast<int>(path.size());
  double lp = (b0 - 1.0) * std::log1p(phi) + (b1 - 1.0) * std::log1p(-phi);
  lp += 0.5 * std::log1p(-phi * phi);
  const double d0 = path[0] - mu;
  lp -= 0.5 * (1.0 - phi * phi) * d0 * d0 / s2;
  for (int t = 1; t < T; ++t) {
    const double e = path[t] - mu - phi * (path[t - 1] - mu);
    lp -= 0.5 * e * e / s2;
  }
  return lp;
}

}  // namespace

SvParams draw_sv_params(const VectorXd& path, const SvParams& current,
                        const PriorConfig& prior, bool centered, Rng& rng,
                        double phi_step, bool* phi_accepted) {
  const int T = static_cast<int>(path.size());
  if (T < 3) throw DimensionError("draw_sv_params: path too short");
  SvParams out = current;

  // mu | phi, sigma2 (centered processes only; factor processes pin mu = 0)
  if (centered) {
    const double phi = out.phi;
    const double s2 = out.sigma2;
    double prec = 1.0 / prior.M_g + (1.0 - phi * phi) / s2;
    double rhs = path[0] * (1.0 - phi * phi) / s2;
    const double c = 1.0 - phi;
    for (int t = 1; t < T; ++t) {
      prec += c * c / s2;
      rhs += c * (path[t] - phi * path[t - 1]) / s2;
    }
    out.mu = rng.normal(rhs / prec, std::sqrt(1.0 / prec));
  } else {
    out.mu = 0.0;
  }

  // phi | mu, sigma2: random-walk Metropolis on the stretched-beta prior
  {
    const double prop = out.phi + phi_step * rng.normal();
    bool accept = false;
    if (std::abs(prop) < 1.0) {
      const double diff =
          sv_phi_log_target(path, out.mu, prop, out.sigma2, prior.b0, prior.b1) -
          sv_phi_log_target(path, out.mu, out.phi, out.sigma2, prior.b0, prior.b1);
      accept = std::log(rng.uniform()) < diff;
    }
    if (accept) out.phi = prop;
    if (phi_accepted) *phi_accepted = accept;
  }

  // sigma2 | mu, phi: Gamma(1/2, 1/(2 B_sigma)) prior makes the conditional
  // a GIG((1 - T)/2, 1/B_sigma, SSE) with the stationary initial term in SSE
  {
    const double d0 = path[0] - out.mu;
    double sse = (1.0 - out.phi * out.phi) * d0 * d0;
    for (int t = 1; t < T; ++t) {
      const double e = path[t] - out.mu - out.phi * (path[t - 1] - out.mu);
      sse += e * e;
    }
    out.sigma2 = draw_gig(0.5 * (1.0 - T), 1.0 / prior.B_sigma, sse, rng);
  }
  return out;
}

FsvDraws run_factor_stage(const MatrixXd& series, int r, const PriorConfig& prior,
                          ChainLengths lengths, Rng& rng) {
  const int m = static_cast<int>(series.rows());
  const int T = static_cast<int>(series.cols());
  if (r < 1 || r > m) throw DimensionError("run_factor_stage: need 1 <= r <= m");
  lengths.validate();

  FactorState state;
  state.loadings = MatrixXd::Zero(m, r);
  state.idio_logvar = MatrixXd::Zero(m, T);
  state.fac_logvar = MatrixXd::Zero(r, T);
  state.idio_sv.assign(m, SvParams{});
  state.fac_sv.assign(r, SvParams{});

  // principal-component start: loadings from the top-r eigenpairs (upper
  // triangle zeroed), factors from the corresponding scores
  {
    const MatrixXd cov = series * series.transpose() / static_cast<double>(T);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(cov);
    for (int j = 0; j < r; ++j) {
      const int idx = m - 1 - j;
      const double scale = std::sqrt(std::max(es.eigenvalues()[idx], 1e-8));
      state.loadings.col(j) = es.eigenvectors().col(idx) * scale;
    }
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < r; ++j) state.loadings(i, j) = 0.0;
    state.factors = state.loadings.colPivHouseholderQr().solve(series);
  }

  std::vector<NormalGammaState> row_scales(m);
  for (int i = 0; i < m; ++i)
    row_scales[i] = NormalGammaState::prior_init(state.row_active(i), prior.omega_tau,
                                                 prior.c_tau0, prior.c_tau1);

  std::vector<double> idio_step(m, 0.1), fac_step(r, 0.1);
  std::vector<int> idio_acc(m, 0), fac_acc(r, 0);
  const int adapt_window = 50;

  FsvDraws out;
  out.factor_draws.reserve(lengths.retained);
  out.mean_loadings = MatrixXd::Zero(m, r);
  out.ev_series = VectorXd::Zero(m);
  out.ev_time = VectorXd::Zero(T);
  out.ev_overall = 0.0;

  const int total = lengths.burnin + lengths.retained * lengths.thin;
  int kept = 0;
  for (int sweep = 0; sweep < total; ++sweep) {
    draw_loadings(series, state, row_scales, rng);
    draw_factors(series, state, rng);

    const MatrixXd resid = series - state.loadings * state.factors;
    bool acc = false;
    for (int i = 0; i < m; ++i) {
      state.idio_logvar.row(i) = draw_logvariance_path(
          resid.row(i).transpose(), state.idio_sv[i],
          state.idio_logvar.row(i).transpose(), rng).transpose();
      state.idio_sv[i] = draw_sv_params(state.idio_logvar.row(i).transpose(),
                                        state.idio_sv[i], prior, true, rng,
                                        idio_step[i], &acc);
      idio_acc[i] += acc;
    }
    for (int j = 0; j < r; ++j) {
      state.fac_logvar.row(j) = draw_logvariance_path(
          state.factors.row(j).transpose(), state.fac_sv[j],
          state.fac_logvar.row(j).transpose(), rng).transpose();
      state.fac_sv[j] = draw_sv_params(state.fac_logvar.row(j).transpose(),
                                       state.fac_sv[j], prior, false, rng,
                                       fac_step[j], &acc);
      fac_acc[j] += acc;
    }

    for (int i = 0; i < m; ++i)
      update_normal_gamma(state.loadings.row(i).head(state.row_active(i)).transpose(),
                          row_scales[i], rng);

    if (sweep < lengths.burnin && (sweep + 1) % adapt_window == 0) {
      auto adapt = [&](std::vector<double>& step, std::vector<int>& acc_count) {
        for (std::size_t i = 0; i < step.size(); ++i) {
          const double rate = acc_count[i] / static_cast<double>(adapt_window);
          step[i] = std::min(2.0, std::max(1e-3, step[i] * std::exp(0.6 * (rate - 0.44))));
          acc_count[i] = 0;
        }
      };
      adapt(idio_step, idio_acc);
      adapt(fac_step, fac_acc);
    }

    if (sweep >= lengths.burnin && (sweep - lengths.burnin) % lengths.thin == 0) {
      out.factor_draws.push_back(state.factors);
      out.mean_loadings += state.loadings;
      const ExplainedVariance ev = explained_variance_share(state);
      out.ev_overall += ev.overall;
      out.ev_series += ev.per_series;
      out.ev_time += ev.per_time;
      ++kept;
    }
  }
  out.mean_loadings /= kept;
  out.ev_overall /= kept;
  out.ev_series /= kept;
  out.ev_time /= kept;
  return out;
}

}  // namespace msfa
