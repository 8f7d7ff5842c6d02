#include "msfa/cli_app.hpp"

#include <CLI11.hpp>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "msfa/config_file.hpp"
#include "msfa/export_data.hpp"
#include "msfa/fsv_diag.hpp"
#include "msfa/ingest.hpp"
#include "msfa/pipeline.hpp"
#include "msfa/sim_study.hpp"

namespace msfa {

namespace {

IngestionSpec read_data_spec(ConfigFile& cfg) {
  IngestionSpec spec;
  spec.csv_path = cfg.get_string("data.csv");
  spec.target_column = cfg.get_string("data.target");
  spec.date_column = cfg.get_string("data.date_column", "");
  spec.target_code = cfg.get_int("data.target_code", 5);
  spec.default_code = cfg.get_int("data.default_code", 1);
  spec.na_tolerance = cfg.get_double("data.na_tolerance", 0.1);
  for (const auto& key : cfg.keys_with_prefix("data.code.")) {
    const std::string name = key.substr(std::string("data.code.").size());
    spec.codes[name] = cfg.get_int(key, 1);
  }
  return spec;
}

PriorConfig read_priors(ConfigFile& cfg) {
  PriorConfig prior;
  prior.m0 = cfg.get_double("priors.m0", prior.m0);
  prior.M0 = cfg.get_double("priors.M0", prior.M0);
  prior.r0 = cfg.get_double("priors.r0", prior.r0);
  prior.R0 = cfg.get_double("priors.R0", prior.R0);
  prior.c0_sig = cfg.get_double("priors.c0_sig", prior.c0_sig);
  prior.d0_sig = cfg.get_double("priors.d0_sig", prior.d0_sig);
  prior.g0 = cfg.get_double("priors.g0", prior.g0);
  prior.G0 = cfg.get_double("priors.G0", prior.G0);
  prior.omega_psi = cfg.get_double("priors.omega_psi", prior.omega_psi);
  prior.c_psi0 = cfg.get_double("priors.c_psi0", prior.c_psi0);
  prior.c_psi1 = cfg.get_double("priors.c_psi1", prior.c_psi1);
  prior.omega_tau = cfg.get_double("priors.omega_tau", prior.omega_tau);
  prior.c_tau0 = cfg.get_double("priors.c_tau0", prior.c_tau0);
  prior.c_tau1 = cfg.get_double("priors.c_tau1", prior.c_tau1);
  prior.b0 = cfg.get_double("priors.b0", prior.b0);
  prior.b1 = cfg.get_double("priors.b1", prior.b1);
  prior.B_sigma = cfg.get_double("priors.B_sigma", prior.B_sigma);
  prior.M_g = cfg.get_double("priors.M_g", prior.M_g);
  prior.beta_fixed_var = cfg.get_double("priors.beta_fixed_var", prior.beta_fixed_var);
  return prior;
}

EstimationConfig read_model(ConfigFile& cfg) {
  EstimationConfig fc;
  fc.H = cfg.get_int("model.H", 2);
  fc.p = cfg.get_int("model.p", 1);
  fc.r = cfg.get_int("model.r", 0);
  fc.h0 = cfg.get_int("model.h0", 1);
  fc.d = cfg.get_int("model.d", 0);
  fc.flags.mean = cfg.get_bool("model.switch_mean", true);
  fc.flags.ar = cfg.get_bool("model.switch_ar", false);
  fc.flags.var = cfg.get_bool("model.switch_var", false);
  fc.use_ng = cfg.get_bool("model.use_ng", true);
  const std::string cov = cfg.get_string("model.covariates", "factors");
  if (cov == "factors")
    fc.covariates = CovariateSource::factors;
  else if (cov == "panel")
    fc.covariates = CovariateSource::panel;
  else if (cov == "none")
    fc.covariates = CovariateSource::none;
  else
    throw ConfigError("model.covariates must be factors, panel or none");
  const std::string dir = cfg.get_string("model.ordering", "decreasing");
  fc.ordering.direction = dir == "decreasing" ? OrderingRule::Direction::decreasing
                                              : OrderingRule::Direction::increasing;
  const std::string block = cfg.get_string("model.ordering_block", "mean");
  fc.ordering.block =
      block == "variance" ? OrderingRule::Block::variance : OrderingRule::Block::mean;
  fc.msar.burnin = cfg.get_int("chain.burnin", 2000);
  fc.msar.retained = cfg.get_int("chain.retained", 5000);
  fc.msar.thin = cfg.get_int("chain.thin", 1);
  fc.factor_stage.burnin = cfg.get_int("chain.factor_burnin", 1000);
  fc.factor_stage.retained = cfg.get_int("chain.factor_retained", 1000);
  fc.factor_stage.thin = cfg.get_int("chain.factor_thin", 1);
  fc.prior = read_priors(cfg);
  return fc;
}

int fail_on_problems(const ConfigFile& cfg) {
  const auto problems = cfg.problems();
  if (problems.empty()) return 0;
  std::cerr << "configuration problems:\n";
  for (const auto& p : problems) std::cerr << "  - " << p << '\n';
  return 2;
}

void write_ingest_report(const IngestResult& data, const std::string& dir) {
  std::ofstream out(dir + "/ingest_report.txt");
  out << "series_kept\t" << data.panel.n_series() << '\n';
  out << "periods\t" << data.panel.n_periods() << '\n';
  for (const auto& name : data.dropped) out << "dropped\t" << name << '\n';
}

void write_factor_outputs(const FactorStageSummary& stage, const FactorPath& path,
                          const std::vector<std::string>& names,
                          const std::vector<std::string>& dates,
                          const std::string& dir) {
  {
    std::ofstream out(dir + "/factors.tsv");
    out << "date";
    for (int j = 0; j < path.n_factors(); ++j) out << "\tfactor" << (j + 1);
    out << '\n';
    for (int t = 0; t < path.length(); ++t) {
      out << (dates.empty() ? std::to_string(t + 1) : dates[t]);
      for (int j = 0; j < path.n_factors(); ++j)
        out << '\t' << format_value(path.values(j, t));
      out << '\n';
    }
  }
  if (!stage.ran) return;
  {
    std::ofstream out(dir + "/explained_variance.tsv");
    out << "# overall\t" << format_value(stage.ev_overall) << '\n';
    out << "series\tshare\n";
    for (int i = 0; i < stage.ev_series.size(); ++i)
      out << names[i] << '\t' << format_value(stage.ev_series[i]) << '\n';
  }
  {
    const auto report = top_loadings_report(
        stage.mean_loadings, names,
        std::min<int>(10, static_cast<int>(names.size())));
    std::ofstream out(dir + "/top_loadings.tsv");
    out << "factor\trank\tseries\n";
    for (std::size_t j = 0; j < report.size(); ++j)
      for (std::size_t i = 0; i < report[j].size(); ++i)
        out << (j + 1) << '\t' << (i + 1) << '\t' << report[j][i] << '\n';
  }
}

int cmd_estimate(ConfigFile& cfg, std::uint64_t seed, const std::string& outdir,
                 int chains) {
  const IngestionSpec spec = read_data_spec(cfg);
  EstimationConfig fc = read_model(cfg);
  const std::string recess = cfg.get_string("data.recessions", "");
  if (const int rc = fail_on_problems(cfg)) return rc;
  fc.seed = seed;
  fc.validate();

  const IngestResult data = ingest(spec);
  write_ingest_report(data, outdir);

  // chains are independent given their seeds; results are merged in chain
  // order, so the thread count never changes the output
  std::vector<DrawStore> stores(chains);
  std::vector<std::exception_ptr> errors(chains);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int c = next.fetch_add(1);
      if (c >= chains) return;
      try {
        EstimationConfig chain_fc = fc;
        chain_fc.seed = seed + c;
        Rng rng(chain_fc.seed);
        stores[c] = run_estimation(data.panel, chain_fc, rng);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  };
  const int n_workers = std::max(
      1, std::min<int>(chains, static_cast<int>(std::thread::hardware_concurrency())));
  std::vector<std::thread> pool;
  for (int i = 0; i < n_workers - 1; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  DrawStore store = merge_draw_stores(std::move(stores));

  const auto summary = summarize(store, 0.9);
  write_summary(outdir + "/summary.tsv", summary, store.two_step);

  std::vector<DateInterval> intervals;
  if (!recess.empty()) intervals = read_intervals(recess);
  export_plot_data(store, data.panel, recess.empty() ? nullptr : &intervals, outdir);
  write_factor_outputs(store.factor_stage, store.covariates, data.panel.names,
                       data.panel.time_index, outdir);
  {
    std::ofstream out(outdir + "/panel.tsv");
    out << "date";
    for (const auto& n : data.panel.names) out << '\t' << n;
    out << '\n';
    for (int t = 0; t < data.panel.n_periods(); ++t) {
      out << (data.panel.time_index.empty() ? std::to_string(t + 1)
                                            : data.panel.time_index[t]);
      for (int i = 0; i < data.panel.n_series(); ++i)
        out << '\t' << format_value(data.panel.series(i, t));
      out << '\n';
    }
  }
  std::cout << "estimate: " << store.size() << " retained draws, outputs in " << outdir
            << "\n";
  return 0;
}

int cmd_simulate(ConfigFile& cfg, std::uint64_t seed, const std::string& outdir) {
  SimStudyConfig sc = SimStudyConfig::defaults();
  sc.N = cfg.get_int("study.n_datasets", 10);
  sc.T = cfg.get_int("study.T", sc.T);
  sc.m = cfg.get_int("study.m", sc.m);
  sc.r = cfg.get_int("study.r", sc.r);
  if (sc.r != sc.beta_truth.cols()) {
    // recycle the default slope pattern for non-default factor counts
    const double base[3] = {-1.2, 1.1, 0.9};
    sc.beta_truth = MatrixXd::Zero(sc.H, sc.r);
    for (int i = 0; i < sc.r; ++i) sc.beta_truth(0, i) = base[i % 3];
  }
  sc.factor_ar = cfg.get_double("study.factor_ar", sc.factor_ar);
  sc.omega_grid = cfg.get_double_list("study.omega_grid", sc.omega_grid);
  sc.include_subsample_variant = cfg.get_bool("study.include_subsample", false);
  sc.subsample_size = cfg.get_int("study.subsample_size", 10);
  sc.threads = cfg.get_int("study.threads", 0);
  sc.msar.burnin = cfg.get_int("chain.burnin", sc.msar.burnin);
  sc.msar.retained = cfg.get_int("chain.retained", sc.msar.retained);
  sc.msar.thin = cfg.get_int("chain.thin", 1);
  sc.factor_stage.burnin = cfg.get_int("chain.factor_burnin", sc.factor_stage.burnin);
  sc.factor_stage.retained =
      cfg.get_int("chain.factor_retained", sc.factor_stage.retained);
  sc.prior = read_priors(cfg);
  if (const int rc = fail_on_problems(cfg)) return rc;
  sc.seed = seed;
  sc.validate();

  const StudyReport report = run_study(sc);
  std::ofstream out(outdir + "/study_report.tsv");
  out << report.to_table();
  std::cout << report.to_table();
  return 0;
}

int cmd_factors(ConfigFile& cfg, std::uint64_t seed, const std::string& outdir) {
  const IngestionSpec spec = read_data_spec(cfg);
  const int r = cfg.get_int("model.r", 7);
  ChainLengths lengths;
  lengths.burnin = cfg.get_int("chain.factor_burnin", 1000);
  lengths.retained = cfg.get_int("chain.factor_retained", 1000);
  lengths.thin = cfg.get_int("chain.factor_thin", 1);
  const PriorConfig prior = read_priors(cfg);
  std::vector<double> cand_default;
  for (int i = 1; i <= 25; ++i) cand_default.push_back(i);
  const auto cand_raw = cfg.get_double_list("factors.candidates", cand_default);
  if (const int rc = fail_on_problems(cfg)) return rc;
  prior.validate();

  const IngestResult data = ingest(spec);
  write_ingest_report(data, outdir);

  std::vector<int> candidates;
  for (double c : cand_raw)
    if (c >= 1 && c < data.panel.n_series()) candidates.push_back(static_cast<int>(c));
  const auto criteria = factor_count_criterion(data.panel.series, candidates);
  {
    std::ofstream out(outdir + "/factor_criteria.tsv");
    out << "r\tcriterion\n";
    for (std::size_t i = 0; i < candidates.size(); ++i)
      out << candidates[i] << '\t' << format_value(criteria[i]) << '\n';
  }

  Rng rng(seed);
  const FsvDraws fsv =
      run_factor_stage(data.panel.series, r, prior, lengths, rng);
  const FactorPath path = export_centered_factor_means(fsv.factor_draws);
  FactorStageSummary stage;
  stage.ran = true;
  stage.mean_loadings = fsv.mean_loadings;
  stage.ev_overall = fsv.ev_overall;
  stage.ev_series = fsv.ev_series;
  stage.ev_time = fsv.ev_time;
  write_factor_outputs(stage, path, data.panel.names, data.panel.time_index, outdir);
  std::cout << "factors: explained variance share " << stage.ev_overall << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Markov-switching AR estimation with factor-driven transition probabilities"};
  app.require_subcommand(1);

  std::string config_path, output_dir = ".";
  std::uint64_t seed = 1;
  int chains = 1;
  app.add_option("--config", config_path, "configuration file")->required();
  app.add_option("--seed", seed, "master seed");
  app.add_option("--output-dir", output_dir, "output directory");
  app.add_option("--chains", chains, "independent chains (estimate only)")
      ->check(CLI::PositiveNumber);

  auto* est = app.add_subcommand("estimate", "two-step estimation on a CSV panel");
  auto* sim = app.add_subcommand("simulate", "synthetic study across model variants");
  auto* fac = app.add_subcommand("factors", "factor stage and factor-count criteria only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    std::filesystem::create_directories(output_dir);
    ConfigFile cfg = ConfigFile::parse_file(config_path);
    if (est->parsed()) return cmd_estimate(cfg, seed, output_dir, chains);
    if (sim->parsed()) return cmd_simulate(cfg, seed, output_dir);
    if (fac->parsed()) return cmd_factors(cfg, seed, output_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace msfa
