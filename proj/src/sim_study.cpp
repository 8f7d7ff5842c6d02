#include "msfa/sim_study.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "msfa/fsv_diag.hpp"
#include "msfa/panel.hpp"

namespace msfa {

SimStudyConfig SimStudyConfig::defaults() {
  SimStudyConfig c;
  c.gamma_truth = MatrixXd::Zero(2, 2);
  c.gamma_truth(0, 0) = 1.5;
  c.gamma_truth(0, 1) = -1.5;
  c.beta_truth = MatrixXd::Zero(2, 3);
  c.beta_truth.row(0) << -1.2, 1.1, 0.9;
  c.mu_truth = VectorXd(2);
  c.mu_truth << -0.25, 0.25;
  c.sigma2_truth = VectorXd(2);
  c.sigma2_truth << 0.1, 0.05;
  return c;
}

void SimStudyConfig::validate() const {
  if (r < 1 || m < 1 || T < 2 || N < 1 || H < 2)
    throw ConfigError("SimStudyConfig: counts must be positive (H >= 2)");
  if (gamma_truth.rows() != H || gamma_truth.cols() != H || beta_truth.rows() != H ||
      beta_truth.cols() != r || mu_truth.size() != H || sigma2_truth.size() != H)
    throw ConfigError("SimStudyConfig: truth dimensions inconsistent with H and r");
  msar.validate();
  factor_stage.validate();
  prior.validate();
}

MatrixXd simulate_factors(const SimStudyConfig& config, Rng& rng) {
  const double phi = config.factor_ar;
  MatrixXd f(config.r, config.T);
  const double sd0 = 1.0 / std::sqrt(1.0 - phi * phi);
  for (int i = 0; i < config.r; ++i) {
    f(i, 0) = rng.normal(0.0, sd0);
    for (int t = 1; t < config.T; ++t) f(i, t) = phi * f(i, t - 1) + rng.normal();
    f.row(i).array() -= f.row(i).mean();
  }
  return f;
}

MatrixXd simulate_panel(const MatrixXd& factors, const SimStudyConfig& config,
                        Rng& rng) {
  const int m = config.m;
  const int T = static_cast<int>(factors.cols());
  const int r = static_cast<int>(factors.rows());

  MatrixXd loadings(m, r);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < r; ++j)
      loadings(i, j) =
          (j > i || rng.uniform() < config.loading_zero_prob) ? 0.0 : rng.normal();

  MatrixXd panel = loadings * factors;
  const double mu_sd = std::sqrt(config.sv_mu_var);
  const double sig_sd = std::sqrt(config.sv_sig_var);
  for (int i = 0; i < m; ++i) {
    const double mu_g = rng.normal(config.sv_mu_mean, mu_sd);
    const double phi_g = rng.uniform(config.sv_phi_lo, config.sv_phi_hi);
    const double sig2_g = std::abs(rng.normal(config.sv_sig_mean, sig_sd));
    double g = rng.normal(mu_g, std::sqrt(sig2_g / (1.0 - phi_g * phi_g)));
    for (int t = 0; t < T; ++t) {
      panel(i, t) += rng.normal(0.0, std::exp(0.5 * g));
      g = mu_g + phi_g * (g - mu_g) + rng.normal(0.0, std::sqrt(sig2_g));
    }
  }
  return panel;
}

void simulate_ms_ar(const MatrixXd& factors, const SimStudyConfig& config, Rng& rng,
                    VectorXd& y, StateSequence& states, TransitionPath& path) {
  const int T = static_cast<int>(factors.cols());
  const int H = config.H;
  TvtpCoefficients truth;
  truth.gamma = config.gamma_truth;
  truth.beta = config.beta_truth;
  truth.h0 = config.h0;
  truth.d = 0;

  path.matrices.resize(T);
  states.states.resize(T);
  y.resize(T);
  std::vector<double> w(H);
  int prev = 1 + static_cast<int>(rng.uniform() * H) % H;
  double y_prev = 0.0;
  for (int t = 0; t < T; ++t) {
    path.matrices[t] = transition_matrix(truth, factors.col(t));
    for (int h = 0; h < H; ++h) w[h] = path.matrices[t](h, prev - 1);
    const int s = rng.categorical(w) + 1;
    states.states[t] = s;
    y[t] = config.mu_truth[s - 1] + config.phi_truth * y_prev +
           rng.normal(0.0, std::sqrt(config.sigma2_truth[s - 1]));
    y_prev = y[t];
    prev = s;
  }
}

SimulatedDataset simulate_dataset(const SimStudyConfig& config, Rng& rng) {
  SimulatedDataset data;
  data.factors = simulate_factors(config, rng);
  data.panel = simulate_panel(data.factors, config, rng);
  simulate_ms_ar(data.factors, config, rng, data.y, data.states, data.path);
  return data;
}

double rmse_metric(const VectorXd& y, const MatrixXd& fitted_draws) {
  if (fitted_draws.cols() != y.size())
    throw DimensionError("rmse_metric: draw length mismatch");
  const int M = static_cast<int>(fitted_draws.rows());
  std::vector<double> rmse(M);
  for (int i = 0; i < M; ++i)
    rmse[i] = std::sqrt((fitted_draws.row(i).transpose() - y).squaredNorm() / y.size());
  std::sort(rmse.begin(), rmse.end());
  return (M % 2 == 1) ? rmse[M / 2] : 0.5 * (rmse[M / 2 - 1] + rmse[M / 2]);
}

double mcr_metric(const StateSequence& truth, const std::vector<StateSequence>& draws) {
  if (draws.empty()) throw DimensionError("mcr_metric: no draws");
  const int T = truth.length();
  std::vector<double> mcr;
  mcr.reserve(draws.size());
  for (const auto& d : draws) {
    if (d.length() != T) throw DimensionError("mcr_metric: state path length mismatch");
    int miss = 0;
    for (int t = 0; t < T; ++t) miss += d.states[t] != truth.states[t];
    mcr.push_back(miss / static_cast<double>(T));
  }
  std::sort(mcr.begin(), mcr.end());
  const int M = static_cast<int>(mcr.size());
  return (M % 2 == 1) ? mcr[M / 2] : 0.5 * (mcr[M / 2 - 1] + mcr[M / 2]);
}

namespace {

struct VariantSpec {
  std::string name;
  CovariateSource source;
  bool use_ng;
  std::optional<double> omega;
  std::optional<int> subsample;  // number of panel rows when subsampling
};

struct CellResult {
  double rmse = std::numeric_limits<double>::quiet_NaN();
  double mcr = std::numeric_limits<double>::quiet_NaN();
  bool healthy = false;
};

std::vector<VariantSpec> make_variants(const SimStudyConfig& config) {
  std::vector<VariantSpec> v;
  v.push_back({"intercept_only", CovariateSource::none, false, std::nullopt, std::nullopt});
  v.push_back({"full_panel", CovariateSource::panel, false, std::nullopt, std::nullopt});
  for (double om : config.omega_grid)
    v.push_back({"full_panel_ng", CovariateSource::panel, true, om, std::nullopt});
  v.push_back({"factor_aug", CovariateSource::factors, false, std::nullopt, std::nullopt});
  for (double om : config.omega_grid)
    v.push_back({"factor_aug_ng", CovariateSource::factors, true, om, std::nullopt});
  if (config.include_subsample_variant)
    v.push_back({"subsample", CovariateSource::panel, false, std::nullopt,
                 config.subsample_size});
  return v;
}

// relabel the truth by the same ordering rule the sampler enforces
StateSequence align_truth(const SimStudyConfig& config, const OrderingRule& rule) {
  std::vector<int> perm(config.H);
  std::iota(perm.begin(), perm.end(), 0);
  const bool desc = rule.direction == OrderingRule::Direction::decreasing;
  std::sort(perm.begin(), perm.end(), [&](int a, int b) {
    return desc ? config.mu_truth[a] > config.mu_truth[b]
                : config.mu_truth[a] < config.mu_truth[b];
  });
  std::vector<int> inv(config.H);
  for (int j = 0; j < config.H; ++j) inv[perm[j]] = j;
  StateSequence map;
  map.states = inv;  // old 0-based label -> new 0-based label
  return map;
}

MatrixXd fitted_values(const VectorXd& y, int p, const DrawStore& store) {
  const int n = static_cast<int>(y.size()) - p;
  MatrixXd fitted(store.size(), n);
  for (int i = 0; i < store.size(); ++i) {
    const auto& reg = store.regimes[i];
    const auto& s = store.states[i];
    for (int t = 0; t < n; ++t) {
      const int h = s.states[t] - 1;
      double f = reg.mu[h];
      for (int j = 0; j < p; ++j) f += reg.phi(h, j) * y[p + t - 1 - j];
      fitted(i, t) = f;
    }
  }
  return fitted;
}

CellResult run_variant(const SimulatedDataset& data, const TimePanel& panel,
                       const FactorPath& factor_means, const VariantSpec& spec,
                       const SimStudyConfig& config, const StateSequence& label_map,
                       std::uint64_t seed) {
  constexpr int p = 1;
  EstimationConfig fc;
  fc.H = config.H;
  fc.p = p;
  fc.h0 = config.h0;
  fc.d = 0;
  fc.flags = SwitchFlags{true, false, true};
  fc.use_ng = spec.use_ng;
  fc.msar = config.msar;
  fc.prior = config.prior;
  if (spec.omega) fc.prior.omega_psi = *spec.omega;
  // truth has mu_1 < mu_2; align the rule with it
  fc.ordering.block = OrderingRule::Block::mean;
  fc.ordering.direction = OrderingRule::Direction::increasing;
  fc.seed = seed;
  Rng rng(seed);

  TimePanel run_panel = panel;
  fc.covariates = spec.source;
  if (spec.source == CovariateSource::factors) {
    // factor stage shared across variants: inject the precomputed means
    fc.covariates = CovariateSource::panel;
    run_panel.series = factor_means.values;
    run_panel.names.assign(factor_means.n_factors(), "factor");
    run_panel.original_mean = VectorXd::Zero(factor_means.n_factors());
    run_panel.original_sd = VectorXd::Ones(factor_means.n_factors());
  } else if (spec.subsample) {
    Rng pick_rng = rng.child(99);
    std::vector<int> idx(panel.n_series());
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < *spec.subsample; ++i) {
      const int j = i + static_cast<int>(pick_rng.uniform() * (idx.size() - i));
      std::swap(idx[i], idx[j]);
    }
    MatrixXd sub(*spec.subsample, panel.n_periods());
    for (int i = 0; i < *spec.subsample; ++i) sub.row(i) = panel.series.row(idx[i]);
    run_panel.series = sub;
    run_panel.names.assign(*spec.subsample, "sub");
    run_panel.original_mean = VectorXd::Zero(*spec.subsample);
    run_panel.original_sd = VectorXd::Ones(*spec.subsample);
  }

  CellResult cell;
  try {
    const DrawStore store = run_estimation(run_panel, fc, rng);
    StateSequence truth_aligned;
    truth_aligned.states.resize(data.states.length() - p);
    for (int t = p; t < data.states.length(); ++t)
      truth_aligned.states[t - p] = label_map.states[data.states.states[t] - 1] + 1;
    cell.rmse = rmse_metric(data.y.tail(data.y.size() - p),
                            fitted_values(data.y, p, store));
    cell.mcr = mcr_metric(truth_aligned, store.states);
    cell.healthy = true;
  } catch (const NumericalError&) {
    cell.healthy = false;  // divergent chain: flagged, excluded from averages
  }
  return cell;
}

}  // namespace

std::string StudyReport::to_table() const {
  std::ostringstream os;
  os << "variant\tomega\trmse\tmcr\trel_rmse\trel_mcr\texcluded\n";
  os.precision(17);
  for (const auto& c : cells) {
    os << c.variant << '\t';
    if (c.omega)
      os << *c.omega;
    else
      os << "off";
    os << '\t' << c.rmse << '\t' << c.mcr << '\t' << c.rel_rmse << '\t' << c.rel_mcr
       << '\t' << c.excluded << '\n';
  }
  return os.str();
}

StudyReport run_study(const SimStudyConfig& config) {
  config.validate();
  const auto variants = make_variants(config);
  const int n_var = static_cast<int>(variants.size());
  OrderingRule rule;
  rule.block = OrderingRule::Block::mean;
  rule.direction = OrderingRule::Direction::increasing;
  const StateSequence label_map = align_truth(config, rule);

  std::vector<std::vector<CellResult>> results(config.N,
                                               std::vector<CellResult>(n_var));
  Rng master(config.seed);

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int idx = next.fetch_add(1);
      if (idx >= config.N) return;
      Rng data_rng = master.child(1000 + idx);
      const SimulatedDataset data = simulate_dataset(config, data_rng);
      TimePanel panel = standardize_panel(data.panel);
      panel.target = data.y;

      // shared two-step factor stage, reused by every factor variant
      FactorPath factor_means;
      bool need_factors = false;
      for (const auto& v : variants)
        need_factors = need_factors || v.source == CovariateSource::factors;
      if (need_factors) {
        Rng f_rng = data_rng.child(7);
        const FsvDraws fsv = run_factor_stage(panel.series, config.r, config.prior,
                                              config.factor_stage, f_rng);
        factor_means = export_centered_factor_means(fsv.factor_draws);
      }

      for (int v = 0; v < n_var; ++v)
        results[idx][v] = run_variant(data, panel, factor_means, variants[v], config,
                                      label_map, data_rng.child(100 + v).seed());
    }
  };

  int n_threads = config.threads > 0
                      ? config.threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min(n_threads, config.N));
  std::vector<std::thread> pool;
  for (int i = 0; i < n_threads - 1; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  StudyReport report;
  report.n_datasets = config.N;
  report.seed = config.seed;
  for (int v = 0; v < n_var; ++v) {
    StudyCell cell;
    cell.variant = variants[v].name;
    cell.omega = variants[v].omega;
    double rmse = 0.0, mcr = 0.0, base_rmse = 0.0, base_mcr = 0.0;
    int n_ok = 0;
    for (int i = 0; i < config.N; ++i) {
      if (!results[i][v].healthy || !results[i][0].healthy) continue;
      rmse += results[i][v].rmse;
      mcr += results[i][v].mcr;
      base_rmse += results[i][0].rmse;
      base_mcr += results[i][0].mcr;
      ++n_ok;
    }
    cell.excluded = config.N - n_ok;
    if (n_ok > 0) {
      cell.rmse = rmse / n_ok;
      cell.mcr = mcr / n_ok;
      cell.rel_rmse = rmse / base_rmse;
      cell.rel_mcr = base_mcr > 0.0 ? mcr / base_mcr : 1.0;
    }
    report.cells.push_back(cell);
  }
  return report;
}

}  // namespace msfa
