#include "msfa/export_data.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>

#include "msfa/companion.hpp"

namespace msfa {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_table(const std::string& path, const std::string& header,
                 const std::vector<std::vector<double>>& rows,
                 const std::vector<std::string>* row_labels) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << header << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (row_labels) out << (*row_labels)[i];
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      if (j > 0 || row_labels) out << '\t';
      out << format_value(rows[i][j]);
    }
    out << '\n';
  }
}

void write_summary(const std::string& path, const std::vector<SummaryRow>& rows,
                   bool two_step) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << "# two_step_factors=" << (two_step ? 1 : 0) << '\n';
  out << "parameter\tmedian\thpd_lo\thpd_hi\n";
  for (const auto& r : rows)
    out << r.name << '\t' << format_value(r.median) << '\t' << format_value(r.lo)
        << '\t' << format_value(r.hi) << '\n';
}

std::vector<DateInterval> read_intervals(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open interval file " + path);
  std::vector<DateInterval> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find_first_of("\t,");
    if (tab == std::string::npos)
      throw ConfigError("interval file: expected two columns per row");
    out.push_back({line.substr(0, tab), line.substr(tab + 1)});
  }
  return out;
}

namespace {

std::vector<std::string> state_labels(const DrawStore& store,
                                      const std::vector<SummaryRow>& summary) {
  // With two states and a switching mean, name them by the posterior median
  // level: lower = recession-like, higher = expansion-like.
  std::vector<std::string> labels(store.H);
  for (int h = 0; h < store.H; ++h) labels[h] = "state" + std::to_string(h + 1);
  if (store.H == 2 && store.regimes[0].flags.mean) {
    double mu1 = 0.0, mu2 = 0.0;
    for (const auto& r : summary) {
      if (r.name == "mu[1]") mu1 = r.median;
      if (r.name == "mu[2]") mu2 = r.median;
    }
    labels[0] = mu1 < mu2 ? "Recession" : "Expansion";
    labels[1] = mu1 < mu2 ? "Expansion" : "Recession";
  }
  return labels;
}

}  // namespace

void export_plot_data(const DrawStore& store, const TimePanel& panel,
                      const std::vector<DateInterval>* intervals,
                      const std::string& dir) {
  if (store.size() == 0) throw DimensionError("export_plot_data: empty draw store");
  const int T = panel.n_periods();
  const int p = store.p;
  auto date_of = [&](int t) {
    return panel.time_index.empty() ? std::to_string(t + 1) : panel.time_index[t];
  };

  {
    std::ofstream out(dir + "/target_series.tsv");
    out << "date\tvalue\n";
    for (int t = 0; t < T; ++t)
      out << date_of(t) << '\t' << format_value(panel.target[t]) << '\n';
  }

  const std::vector<SummaryRow> summary = summarize(store, 0.9);
  const std::vector<std::string> labels = state_labels(store, summary);

  {
    const MatrixXd probs = smoothed_state_probabilities(store);
    std::ofstream out(dir + "/state_probabilities.tsv");
    out << "date";
    for (int h = 0; h < store.H; ++h) out << '\t' << labels[h];
    out << '\n';
    for (int t = 0; t < probs.rows(); ++t) {
      out << date_of(p + t);
      for (int h = 0; h < store.H; ++h) out << '\t' << format_value(probs(t, h));
      out << '\n';
    }
  }

  if (intervals) {
    std::ofstream out(dir + "/overlay_intervals.tsv");
    out << "start\tend\n";
    for (const auto& iv : *intervals) out << iv.start << '\t' << iv.end << '\n';
  }

  if (p > 0) {
    // per-draw companion eigenvalues; with a switching AR block, one row per
    // state. Medians taken per eigenvalue position after sorting by modulus.
    const bool sw = store.regimes[0].flags.ar;
    const int n_blocks = sw ? store.H : 1;
    std::ofstream out(dir + "/companion_eigenvalues.tsv");
    out << "draw\tstate\treal\timag\n";
    std::vector<std::vector<std::complex<double>>> all(
        n_blocks, std::vector<std::complex<double>>());
    for (int i = 0; i < store.size(); ++i) {
      for (int b = 0; b < n_blocks; ++b) {
        auto eig = companion_eigenvalues(store.regimes[i].phi.row(sw ? b : 0).transpose());
        std::sort(eig.begin(), eig.end(), [](const auto& a, const auto& c) {
          const double ma = std::abs(a), mc = std::abs(c);
          if (ma != mc) return ma > mc;
          if (a.real() != c.real()) return a.real() > c.real();
          return a.imag() > c.imag();
        });
        for (const auto& e : eig) {
          out << (i + 1) << '\t' << (b + 1) << '\t' << format_value(e.real()) << '\t'
              << format_value(e.imag()) << '\n';
          all[b].push_back(e);
        }
      }
    }
    std::ofstream med(dir + "/companion_eigenvalues_median.tsv");
    med << "state\tposition\treal\timag\n";
    for (int b = 0; b < n_blocks; ++b) {
      const int M = store.size();
      for (int pos = 0; pos < p; ++pos) {
        std::vector<double> re(M), im(M);
        for (int i = 0; i < M; ++i) {
          re[i] = all[b][i * p + pos].real();
          im[i] = all[b][i * p + pos].imag();
        }
        auto median = [](std::vector<double>& v) {
          std::sort(v.begin(), v.end());
          const int n = static_cast<int>(v.size());
          return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
        };
        med << (b + 1) << '\t' << (pos + 1) << '\t' << format_value(median(re)) << '\t'
            << format_value(median(im)) << '\n';
      }
    }
  }

  {
    std::ofstream out(dir + "/coefficients.tsv");
    out << "parameter\tmedian\thpd_lo\thpd_hi\n";
    for (const auto& r : summary)
      if (r.name.rfind("gamma", 0) == 0 || r.name.rfind("beta", 0) == 0)
        out << r.name << '\t' << format_value(r.median) << '\t' << format_value(r.lo)
            << '\t' << format_value(r.hi) << '\n';
  }

  {
    std::ofstream out(dir + "/loglik_trace.tsv");
    out << "draw\tloglik\n";
    for (std::size_t i = 0; i < store.loglik.size(); ++i)
      out << (i + 1) << '\t' << format_value(store.loglik[i]) << '\n';
  }
}

}  // namespace msfa
