#pragma once

#include <map>
#include <string>
#include <vector>

#include "msfa/types.hpp"

namespace msfa {

/// CSV ingestion rules: per-column stationarity transformation codes in the
/// FRED-QD convention (1 level, 2 first difference, 3 second difference,
/// 4 log, 5 log difference, 6 second log difference, 7 difference of percent
/// change) and the tolerated share of missing values before a series is
/// dropped.
struct IngestionSpec {
  std::string csv_path;
  std::string target_column;
  std::string date_column;  // empty: first column
  int target_code = 5;
  int default_code = 1;
  std::map<std::string, int> codes;  // per-column overrides
  double na_tolerance = 0.1;

  void validate() const;
};

struct IngestResult {
  TimePanel panel;                   // standardized covariates + raw-scale target
  std::vector<std::string> dropped;  // series removed by the NA rule
};

/// Parse, transform, trim leading/trailing rows with missing values, drop
/// over-missing series (reported by name), standardize the covariates and
/// transform (but never standardize) the target.
IngestResult ingest(const IngestionSpec& spec);

/// Apply one transformation code; missing leading values are NaN.
VectorXd apply_transform(const VectorXd& x, int code);

}  // namespace msfa
