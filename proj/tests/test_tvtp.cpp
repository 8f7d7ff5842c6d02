#include <doctest.h>

#include <cmath>

#include "msfa/drum.hpp"
#include "msfa/tvtp.hpp"
#include "oracles.hpp"

using namespace msfa;

TEST_CASE("transition matrix: uniform softmax and pinned scalar values") {
  {
    const auto coeffs = TvtpCoefficients::zero(3, 0, 1, 0);
    const MatrixXd m = transition_matrix(coeffs, VectorXd(0));
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) CHECK(m(j, k) == doctest::Approx(1.0 / 3.0));
  }
  {
    auto coeffs = TvtpCoefficients::zero(2, 3, 2, 0);
    coeffs.gamma(0, 0) = 1.5;
    coeffs.gamma(0, 1) = -1.5;
    coeffs.beta.row(0) << -1.2, 1.1, 0.9;
    const MatrixXd m0 = transition_matrix(coeffs, VectorXd::Zero(3));
    CHECK(m0(0, 0) == doctest::Approx(std::exp(1.5) / (1.0 + std::exp(1.5))).epsilon(1e-10));
    CHECK(m0(1, 0) == doctest::Approx(1.0 / (1.0 + std::exp(1.5))).epsilon(1e-10));
    CHECK(m0(0, 0) == doctest::Approx(0.81757).epsilon(1e-4));
    CHECK(m0(1, 0) == doctest::Approx(0.18243).epsilon(1e-4));

    VectorXd z(3);
    z << 1.0, 0.0, 0.0;
    const MatrixXd m1 = transition_matrix(coeffs, z);
    CHECK(m1(0, 0) == doctest::Approx(1.0 / (1.0 + std::exp(-0.3))).epsilon(1e-10));
    CHECK(m1(0, 0) == doctest::Approx(0.574443).epsilon(1e-5));
  }
}

TEST_CASE("transition matrix: columns are distributions for random inputs") {
  Rng rng(30);
  for (int rep = 0; rep < 50; ++rep) {
    const int H = 2 + rep % 3, r = rep % 4;
    auto coeffs = TvtpCoefficients::zero(H, r, 1 + rep % H, 0);
    for (int j = 0; j < H; ++j) {
      if (j == coeffs.h0 - 1) continue;
      for (int k = 0; k < H; ++k) coeffs.gamma(j, k) = 3.0 * rng.normal();
      for (int i = 0; i < r; ++i) coeffs.beta(j, i) = 2.0 * rng.normal();
    }
    VectorXd z(r);
    for (int i = 0; i < r; ++i) z[i] = rng.normal();
    const MatrixXd m = transition_matrix(coeffs, z);
    for (int k = 0; k < H; ++k) {
      CHECK(std::abs(m.col(k).sum() - 1.0) < 1e-10);
      for (int j = 0; j < H; ++j) {
        CHECK(m(j, k) > 0.0);
        CHECK(m(j, k) < 1.0);
      }
    }
  }
}

TEST_CASE("transition matrix: softmax shift invariance (baseline identification)") {
  Rng rng(31);
  const int H = 3, r = 2;
  auto coeffs = TvtpCoefficients::zero(H, r, 2, 0);
  for (int j = 0; j < H; ++j) {
    if (j == 1) continue;
    for (int k = 0; k < H; ++k) coeffs.gamma(j, k) = rng.normal();
    for (int i = 0; i < r; ++i) coeffs.beta(j, i) = rng.normal();
  }
  VectorXd z(r);
  z << 0.4, -1.1;
  const MatrixXd base = transition_matrix(coeffs, z);

  // add a constant vector to every destination's coefficients (per source
  // for gamma, shared for beta): probabilities must not move
  TvtpCoefficients shifted = coeffs;
  VectorXd cg(H), cb(r);
  cg << 0.8, -0.3, 1.7;
  cb << 0.5, -0.9;
  for (int j = 0; j < H; ++j) {
    for (int k = 0; k < H; ++k) shifted.gamma(j, k) += cg[k];
    for (int i = 0; i < r; ++i) shifted.beta(j, i) += cb[i];
  }
  shifted.h0 = 0;  // baseline rows no longer zero; bypass validate
  const MatrixXd moved = [&] {
    TvtpCoefficients c = shifted;
    c.h0 = 1;  // any valid index; transition_matrix does not re-validate
    return transition_matrix(c, z);
  }();
  CHECK((moved - base).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("transition path: delay alignment and constant factors") {
  Rng rng(32);
  const int T = 12, r = 2;
  FactorPath factors;
  factors.values.resize(r, T);
  for (int i = 0; i < r; ++i) {
    for (int t = 0; t < T; ++t) factors.values(i, t) = rng.normal();
    factors.values.row(i).array() -= factors.values.row(i).mean();
  }
  factors.means = VectorXd::Zero(r);

  auto coeffs = TvtpCoefficients::zero(2, r, 2, 0);
  coeffs.gamma(0, 0) = 0.3;
  coeffs.beta.row(0) << 1.0, -0.5;

  const int p = 2;
  const auto path0 = build_transition_path(coeffs, factors, T, p);
  CHECK(path0.length() == T - p);
  for (int t = 0; t < T - p; ++t) {
    const MatrixXd expect = transition_matrix(coeffs, factors.values.col(p + t));
    CHECK((path0.matrices[t] - expect).cwiseAbs().maxCoeff() == 0.0);
  }

  coeffs.d = 1;
  const auto path1 = build_transition_path(coeffs, factors, T, p);
  for (int t = 0; t < T - p; ++t) {
    const MatrixXd expect = transition_matrix(coeffs, factors.values.col(p + t - 1));
    CHECK((path1.matrices[t] - expect).cwiseAbs().maxCoeff() == 0.0);
  }

  coeffs.d = p + 1;  // reaches before the first observation
  CHECK_THROWS_AS(build_transition_path(coeffs, factors, T, p), DimensionError);

  coeffs.d = 0;
  FactorPath flat;
  flat.values = MatrixXd::Zero(r, T);
  flat.means = VectorXd::Zero(r);
  const auto path_flat = build_transition_path(coeffs, flat, T, p);
  for (int t = 1; t < T - p; ++t)
    CHECK((path_flat.matrices[t] - path_flat.matrices[0]).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("transition path: centering compensation leaves the path unchanged") {
  Rng rng(33);
  const int T = 10, r = 2, H = 3;
  FactorPath factors;
  factors.values.resize(r, T);
  for (int i = 0; i < r; ++i) {
    for (int t = 0; t < T; ++t) factors.values(i, t) = rng.normal();
    factors.values.row(i).array() -= factors.values.row(i).mean();
  }
  factors.means = VectorXd::Zero(r);

  auto coeffs = TvtpCoefficients::zero(H, r, 1, 0);
  for (int j = 1; j < H; ++j) {
    for (int k = 0; k < H; ++k) coeffs.gamma(j, k) = rng.normal();
    for (int i = 0; i < r; ++i) coeffs.beta(j, i) = rng.normal();
  }

  VectorXd shift(r);
  shift << 0.7, -1.3;
  FactorPath moved = factors;
  moved.values.colwise() += shift;
  TvtpCoefficients adjusted = coeffs;
  for (int j = 0; j < H; ++j)
    for (int k = 0; k < H; ++k)
      adjusted.gamma(j, k) -= coeffs.beta.row(j).dot(shift);

  const int p = 1;
  const auto base = build_transition_path(coeffs, factors, T, p);
  // moved factors are no longer centered; construct matrices directly
  for (int t = p; t < T; ++t) {
    const MatrixXd a = transition_matrix(adjusted, moved.values.col(t));
    CHECK((a - base.matrices[t - p]).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("logistic mixture table: moments and CDF sup-norm") {
  const auto& mix = logistic_mixture_table();
  REQUIRE(mix.size() >= 6);
  double wsum = 0.0, var = 0.0;
  for (const auto& c : mix) {
    wsum += c.weight;
    var += c.weight * c.variance;
  }
  CHECK(std::abs(wsum - 1.0) < 1e-12);
  const double pi2_3 = 3.14159265358979324 * 3.14159265358979324 / 3.0;
  CHECK(var == doctest::Approx(pi2_3).epsilon(0.01));

  double sup = 0.0;
  for (double x = -10.0; x <= 10.0; x += 0.01) {
    double cdf = 0.0;
    for (const auto& c : mix) cdf += c.weight * oracle::normal_cdf(x / std::sqrt(c.variance));
    sup = std::max(sup, std::abs(cdf - oracle::logistic_cdf(x)));
  }
  CHECK(sup < 0.005);
}

TEST_CASE("collect transitions: first usable period is dropped, delay shifts columns") {
  const int T = 9, p = 2, r = 1;
  FactorPath factors;
  factors.values.resize(r, T);
  for (int t = 0; t < T; ++t) factors.values(0, t) = t - (T - 1) / 2.0;
  factors.means = VectorXd::Zero(r);
  StateSequence s;
  s.states = {1, 2, 2, 1, 2, 1, 1};  // n = T - p = 7
  const auto obs = collect_transitions(s, factors, p, 1);
  REQUIRE(obs.size() == 6);
  CHECK(obs.source[0] == 1);
  CHECK(obs.dest[0] == 2);
  CHECK(obs.source[5] == 1);
  CHECK(obs.dest[5] == 1);
  // transition into period t = p+1+u uses column p+u-d
  for (int u = 1; u < 7; ++u)
    CHECK(obs.z(0, u - 1) == factors.values(0, p + u - 1));
}

TEST_CASE("drum: binary-logit posterior recovers the generating coefficients") {
  Rng rng(34);
  const int n = 2000;
  const double gamma_true = 1.0, beta_true = 0.8;
  FactorPath factors;
  factors.values.resize(1, n + 1);
  for (int t = 0; t <= n; ++t) factors.values(0, t) = rng.normal();
  factors.values.row(0).array() -= factors.values.row(0).mean();
  factors.means = VectorXd::Zero(1);

  TransitionObservations obs;
  obs.z.resize(1, n);
  for (int i = 0; i < n; ++i) {
    obs.source.push_back(1);
    const double z = factors.values(0, i);
    obs.z(0, i) = z;
    const double pr = 1.0 / (1.0 + std::exp(-(gamma_true + beta_true * z)));
    obs.dest.push_back(rng.uniform() < pr ? 1 : 2);
  }

  PriorConfig prior;
  prior.G0 = 4.0;
  prior.beta_fixed_var = 4.0;
  auto coeffs = TvtpCoefficients::zero(2, 1, 2, 0);
  const int burn = 500, keep = 4000;
  double g_acc = 0.0, g_sq = 0.0, b_acc = 0.0, b_sq = 0.0;
  for (int it = 0; it < burn + keep; ++it) {
    coeffs = draw_mnl_coefficients(obs, coeffs, nullptr, prior, rng);
    if (it < burn) continue;
    g_acc += coeffs.gamma(0, 0);
    g_sq += coeffs.gamma(0, 0) * coeffs.gamma(0, 0);
    b_acc += coeffs.beta(0, 0);
    b_sq += coeffs.beta(0, 0) * coeffs.beta(0, 0);
  }
  g_acc /= keep;
  b_acc /= keep;
  const double g_sd = std::sqrt(g_sq / keep - g_acc * g_acc);
  const double b_sd = std::sqrt(b_sq / keep - b_acc * b_acc);
  CHECK(std::abs(g_acc - gamma_true) < 3.0 * g_sd);
  CHECK(std::abs(b_acc - beta_true) < 3.0 * b_sd);
}

TEST_CASE("drum: intercept-only model matches empirical transition log-odds") {
  Rng rng(35);
  const int n = 20000;
  TransitionObservations obs;
  obs.z.resize(0, n);
  int n11 = 0, n1 = 0, n12 = 0, n2 = 0;
  for (int i = 0; i < n; ++i) {
    const int src = 1 + (rng.uniform() < 0.5);
    const double pr = src == 1 ? 0.75 : 0.35;  // P(dest = 1 | src)
    const int dst = rng.uniform() < pr ? 1 : 2;
    obs.source.push_back(src);
    obs.dest.push_back(dst);
    if (src == 1) {
      ++n1;
      n11 += dst == 1;
    } else {
      ++n2;
      n12 += dst == 1;
    }
  }
  PriorConfig prior;
  prior.G0 = 100.0;  // nearly flat so the posterior mean tracks the data
  auto coeffs = TvtpCoefficients::zero(2, 0, 2, 0);
  const int burn = 200, keep = 2000;
  double g1 = 0.0, g2 = 0.0;
  for (int it = 0; it < burn + keep; ++it) {
    coeffs = draw_mnl_coefficients(obs, coeffs, nullptr, prior, rng);
    if (it < burn) continue;
    g1 += coeffs.gamma(0, 0);
    g2 += coeffs.gamma(0, 1);
  }
  g1 /= keep;
  g2 /= keep;
  const double odds1 = std::log(n11 / static_cast<double>(n1 - n11));
  const double odds2 = std::log(n12 / static_cast<double>(n2 - n12));
  CHECK(g1 == doctest::Approx(odds1).epsilon(0.05));
  CHECK(g2 == doctest::Approx(odds2).epsilon(0.05));
}

TEST_CASE("drum: empty source state draws its intercept from the prior") {
  Rng rng(36);
  const int n = 300;
  TransitionObservations obs;
  obs.z.resize(0, n);
  for (int i = 0; i < n; ++i) {
    obs.source.push_back(1);  // source 2 never observed
    obs.dest.push_back(1 + (rng.uniform() < 0.4));
  }
  PriorConfig prior;  // g0 = 0, G0 = 4
  auto coeffs = TvtpCoefficients::zero(2, 0, 2, 0);
  const int keep = 20000;
  double acc = 0.0, sq = 0.0;
  for (int it = 0; it < keep; ++it) {
    coeffs = draw_mnl_coefficients(obs, coeffs, nullptr, prior, rng);
    acc += coeffs.gamma(0, 1);
    sq += coeffs.gamma(0, 1) * coeffs.gamma(0, 1);
  }
  acc /= keep;
  CHECK(std::abs(acc - prior.g0) < 0.06);
  CHECK(sq / keep - acc * acc == doctest::Approx(prior.G0).epsilon(0.05));
}
