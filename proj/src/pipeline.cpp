#include "msfa/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "msfa/fsv_diag.hpp"
#include "msfa/ms_regression.hpp"

namespace msfa {

void EstimationConfig::validate() const {
  if (H < 1) throw ConfigError("EstimationConfig: H must be >= 1");
  if (p < 0) throw ConfigError("EstimationConfig: p must be >= 0");
  if (h0 < 1 || h0 > H) throw ConfigError("EstimationConfig: baseline state out of range");
  if (d < 0 || d > p) throw ConfigError("EstimationConfig: delay must satisfy 0 <= d <= p");
  if (covariates == CovariateSource::factors && r < 1)
    throw ConfigError("EstimationConfig: factor covariates need r >= 1");
  msar.validate();
  factor_stage.validate();
  prior.validate();
}

DrawStore run_estimation(const TimePanel& panel, const EstimationConfig& config, Rng& rng) {
  config.validate();
  const int T = static_cast<int>(panel.target.size());
  const int p = config.p;
  const int H = config.H;
  const int n = T - p;
  if (n < 2) throw DimensionError("run_estimation: target series too short for lag order");

  DrawStore store;
  store.H = H;
  store.p = p;
  store.lengths = config.msar;
  store.seed = config.seed;

  // stage 1: covariates for the transition logit
  Rng factor_rng = rng.child(1);
  Rng ms_rng = rng.child(2);
  int r = 0;
  switch (config.covariates) {
    case CovariateSource::none:
      store.covariates = FactorPath{MatrixXd(0, T), VectorXd(0)};
      break;
    case CovariateSource::panel: {
      // standardized rows are already centered
      store.covariates = FactorPath{panel.series, VectorXd::Zero(panel.n_series())};
      r = panel.n_series();
      break;
    }
    case CovariateSource::factors: {
      const FsvDraws fsv = run_factor_stage(panel.series, config.r, config.prior,
                                            config.factor_stage, factor_rng);
      store.covariates = export_centered_factor_means(fsv.factor_draws);
      store.factor_stage.ran = true;
      store.factor_stage.mean_loadings = fsv.mean_loadings;
      store.factor_stage.ev_overall = fsv.ev_overall;
      store.factor_stage.ev_series = fsv.ev_series;
      store.factor_stage.ev_time = fsv.ev_time;
      store.two_step = true;
      r = config.r;
      break;
    }
  }
  store.r = r;

  // stage 2 initialization: neutral starts plus burn-in
  ParameterDraw draw;
  draw.regime.flags = config.flags;
  draw.regime.mu = VectorXd::Constant(H, config.prior.m0);
  draw.regime.phi = MatrixXd::Constant(H, p, config.prior.r0);
  draw.regime.sigma2 = VectorXd::Ones(H);
  draw.tvtp = TvtpCoefficients::zero(H, r, config.h0, config.d);
  draw.states.states.resize(n);
  for (int t = 0; t < n; ++t)
    draw.states.states[t] = 1 + static_cast<int>(ms_rng.uniform() * H) % H;
  if (config.use_ng && r > 0) {
    draw.slope_scales.assign(
        H, NormalGammaState::prior_init(r, config.prior.omega_psi, config.prior.c_psi0,
                                        config.prior.c_psi1));
  }

  const VectorXd init = VectorXd::Constant(H, 1.0 / H);
  const int total = config.msar.burnin + config.msar.retained * config.msar.thin;
  store.regimes.reserve(config.msar.retained);

  for (int sweep = 0; sweep < total; ++sweep) {
    const TransitionPath path = build_transition_path(draw.tvtp, store.covariates, T, p);
    FilterOutput filter;
    try {
      filter = hamilton_filter(panel.target, p, draw.regime, path, init);
    } catch (const NumericalError& e) {
      throw NumericalError("run_estimation: sweep " + std::to_string(sweep) + ": " + e.what());
    }
    if (!std::isfinite(filter.loglik))
      throw NumericalError("run_estimation: non-finite log-likelihood at sweep " +
                           std::to_string(sweep));
    draw.states = ffbs_sample(filter, path, ms_rng);

    draw.regime = draw_regime_regression(panel.target, p, draw.states, config.prior,
                                         config.flags, draw.regime, ms_rng);

    if (H > 1) {
      const TransitionObservations obs =
          collect_transitions(draw.states, store.covariates, p, config.d);
      draw.tvtp = draw_mnl_coefficients(
          obs, draw.tvtp, draw.slope_scales.empty() ? nullptr : &draw.slope_scales,
          config.prior, ms_rng);
      for (int h = 0; h < H && !draw.slope_scales.empty(); ++h) {
        if (h == config.h0 - 1) continue;
        update_normal_gamma(draw.tvtp.beta.row(h).transpose(), draw.slope_scales[h],
                            ms_rng);
      }
      draw = enforce_identification(draw, config.ordering);
    }

    if (sweep >= config.msar.burnin &&
        (sweep - config.msar.burnin) % config.msar.thin == 0) {
      store.regimes.push_back(draw.regime);
      store.tvtp.push_back(draw.tvtp);
      store.states.push_back(draw.states);
      if (!draw.slope_scales.empty()) store.slope_scales.push_back(draw.slope_scales);
      store.loglik.push_back(filter.loglik);
    }
  }
  return store;
}

SummaryRow summarize_scalar(std::vector<double> draws, double hpd_level,
                            const std::string& name) {
  if (draws.empty()) throw DimensionError("summarize_scalar: no draws");
  if (!(hpd_level > 0.0 && hpd_level < 1.0))
    throw ParameterError("summarize_scalar: level must be in (0,1)");
  std::sort(draws.begin(), draws.end());
  const int M = static_cast<int>(draws.size());
  SummaryRow row;
  row.name = name;
  row.median = (M % 2 == 1) ? draws[M / 2] : 0.5 * (draws[M / 2 - 1] + draws[M / 2]);
  const int L = std::min(M, std::max(1, static_cast<int>(std::ceil(hpd_level * M))));
  int best = 0;
  double width = draws[L - 1] - draws[0];
  for (int j = 1; j + L <= M; ++j) {
    const double w = draws[j + L - 1] - draws[j];
    if (w < width) {
      width = w;
      best = j;
    }
  }
  row.lo = draws[best];
  row.hi = draws[best + L - 1];
  return row;
}

std::vector<SummaryRow> summarize(const DrawStore& store, double hpd_level) {
  if (store.size() == 0) throw DimensionError("summarize: empty draw store");
  const int M = store.size();
  const int H = store.H;
  const int p = store.p;
  const int r = store.r;
  const SwitchFlags flags = store.regimes[0].flags;
  std::vector<SummaryRow> rows;
  std::vector<double> buf(M);

  auto add = [&](const std::string& name, auto getter) {
    for (int i = 0; i < M; ++i) buf[i] = getter(i);
    rows.push_back(summarize_scalar(buf, hpd_level, name));
  };

  for (int h = 0; h < (flags.mean ? H : 1); ++h)
    add(flags.mean ? "mu[" + std::to_string(h + 1) + "]" : "mu",
        [&](int i) { return store.regimes[i].mu[flags.mean ? h : 0]; });
  for (int h = 0; h < (flags.var ? H : 1); ++h)
    add(flags.var ? "sigma2[" + std::to_string(h + 1) + "]" : "sigma2",
        [&](int i) { return store.regimes[i].sigma2[flags.var ? h : 0]; });
  for (int h = 0; h < (flags.ar ? H : 1); ++h)
    for (int j = 0; j < p; ++j) {
      const std::string name = flags.ar ? "phi[" + std::to_string(h + 1) + "][" +
                                              std::to_string(j + 1) + "]"
                                        : "phi[" + std::to_string(j + 1) + "]";
      add(name, [&](int i) { return store.regimes[i].phi(flags.ar ? h : 0, j); });
    }
  if (H > 1 && !store.tvtp.empty()) {
    const int h0 = store.tvtp[0].h0;
    for (int j = 0; j < H; ++j) {
      if (j == h0 - 1) continue;
      for (int k = 0; k < H; ++k)
        add("gamma[" + std::to_string(j + 1) + "][" + std::to_string(k + 1) + "]",
            [&](int i) { return store.tvtp[i].gamma(j, k); });
      for (int i2 = 0; i2 < r; ++i2)
        add("beta[" + std::to_string(j + 1) + "][" + std::to_string(i2 + 1) + "]",
            [&](int i) { return store.tvtp[i].beta(j, i2); });
    }
  }
  return rows;
}

MatrixXd smoothed_state_probabilities(const DrawStore& store) {
  if (store.states.empty())
    throw DimensionError("smoothed_state_probabilities: empty draw store");
  const int n = store.states[0].length();
  MatrixXd out = MatrixXd::Zero(n, store.H);
  for (const auto& seq : store.states)
    for (int t = 0; t < n; ++t) out(t, seq.states[t] - 1) += 1.0;
  out /= static_cast<double>(store.states.size());
  return out;
}

DrawStore merge_draw_stores(std::vector<DrawStore> stores) {
  if (stores.empty()) throw DimensionError("merge_draw_stores: nothing to merge");
  DrawStore merged = std::move(stores[0]);
  for (std::size_t c = 1; c < stores.size(); ++c) {
    auto& s = stores[c];
    if (s.H != merged.H || s.p != merged.p || s.r != merged.r)
      throw DimensionError("merge_draw_stores: incompatible chains");
    std::move(s.regimes.begin(), s.regimes.end(), std::back_inserter(merged.regimes));
    std::move(s.tvtp.begin(), s.tvtp.end(), std::back_inserter(merged.tvtp));
    std::move(s.states.begin(), s.states.end(), std::back_inserter(merged.states));
    std::move(s.slope_scales.begin(), s.slope_scales.end(),
              std::back_inserter(merged.slope_scales));
    merged.loglik.insert(merged.loglik.end(), s.loglik.begin(), s.loglik.end());
  }
  return merged;
}

}  // namespace msfa
