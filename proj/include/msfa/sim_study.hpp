#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "msfa/pipeline.hpp"
#include "msfa/types.hpp"

namespace msfa {

/// Ground truth and schedule for the synthetic study: a layered DGP (AR(1)
/// factors -> factor-SV panel -> logit transition probabilities -> switching
/// AR target) estimated under several covariate/shrinkage variants.
struct SimStudyConfig {
  int r = 3;
  int m = 200;
  int T = 250;
  int N = 100;  // datasets
  int H = 2;
  double factor_ar = 0.7;

  // transition-logit truth, destination-indexed with baseline state 2
  MatrixXd gamma_truth;  // H x H
  MatrixXd beta_truth;   // H x r
  int h0 = 2;

  // switching-AR truth
  VectorXd mu_truth;      // (-0.25, 0.25)
  double phi_truth = 0.55;
  VectorXd sigma2_truth;  // (0.1, 0.05)

  // log-variance DGP for the panel
  double sv_phi_lo = -0.8, sv_phi_hi = 0.8;
  double sv_mu_mean = 0.2, sv_mu_var = 0.2;
  double sv_sig_mean = 0.2, sv_sig_var = 0.2;
  double loading_zero_prob = 0.3;

  std::vector<double> omega_grid{0.2, 0.6, 1.0};
  bool include_subsample_variant = false;
  int subsample_size = 10;

  ChainLengths msar{2000, 5000, 1};
  ChainLengths factor_stage{1000, 1000, 1};
  PriorConfig prior;
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = hardware concurrency

  static SimStudyConfig defaults();
  void validate() const;
};

struct SimulatedDataset {
  MatrixXd factors;  // r x T true factor paths (centered)
  MatrixXd panel;    // m x T
  VectorXd y;        // T
  StateSequence states;  // T true labels
  TransitionPath path;   // T matrices (one per period, p=0 alignment)
};

MatrixXd simulate_factors(const SimStudyConfig& config, Rng& rng);
MatrixXd simulate_panel(const MatrixXd& factors, const SimStudyConfig& config, Rng& rng);

/// States and target from the logit transition truth driven by the true
/// factors; y_0 = 0, initial state uniform.
void simulate_ms_ar(const MatrixXd& factors, const SimStudyConfig& config, Rng& rng,
                    VectorXd& y, StateSequence& states, TransitionPath& path);

SimulatedDataset simulate_dataset(const SimStudyConfig& config, Rng& rng);

/// Per-draw root mean squared error over time, then the median across draws.
double rmse_metric(const VectorXd& y, const MatrixXd& fitted_draws);

/// Per-draw share of misclassified states, then the median across draws.
double mcr_metric(const StateSequence& truth, const std::vector<StateSequence>& draws);

struct StudyCell {
  std::string variant;
  std::optional<double> omega;  // set for shrinkage variants
  double rmse = 0.0, mcr = 0.0;
  double rel_rmse = 1.0, rel_mcr = 1.0;
  int excluded = 0;  // datasets dropped by chain health checks
};

struct StudyReport {
  std::vector<StudyCell> cells;
  int n_datasets = 0;
  std::uint64_t seed = 0;

  std::string to_table() const;  // delimited text, one row per cell
};

/// Full study: simulate N datasets, estimate the shared factor stage once
/// per dataset, run every variant, and aggregate both metrics relative to
/// the intercept-only baseline. Datasets run concurrently on independent
/// child streams, so the report is reproducible for a fixed seed.
StudyReport run_study(const SimStudyConfig& config);

}  // namespace msfa
