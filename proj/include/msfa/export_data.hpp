#pragma once

#include <string>
#include <vector>

#include "msfa/pipeline.hpp"
#include "msfa/types.hpp"

namespace msfa {

/// Optional shaded-interval overlay (e.g. recession dates): one interval per
/// row, echoed through for plotting.
struct DateInterval {
  std::string start;
  std::string end;
};

std::vector<DateInterval> read_intervals(const std::string& path);

/// Write every plot-ready artifact of an estimation run into `dir`:
/// target series, smoothed state probabilities, companion eigenvalues per
/// retained draw plus their medians, logit coefficient summaries, and the
/// interval overlay when given. All numbers at 17 significant digits.
void export_plot_data(const DrawStore& store, const TimePanel& panel,
                      const std::vector<DateInterval>* intervals,
                      const std::string& dir);

/// Tab-delimited writers shared by the CLI subcommands.
void write_table(const std::string& path, const std::string& header,
                 const std::vector<std::vector<double>>& rows,
                 const std::vector<std::string>* row_labels = nullptr);
void write_summary(const std::string& path, const std::vector<SummaryRow>& rows,
                   bool two_step);
std::string format_value(double v);

}  // namespace msfa
