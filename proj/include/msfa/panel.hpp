#pragma once

#include "msfa/types.hpp"

namespace msfa {

/// Regression form of an AR(p): row t of `design` is (1, y_{t-1}, ..., y_{t-p})
/// aligned with `response` entry y_t. The first p observations are consumed
/// as initial conditions.
struct LagDesign {
  MatrixXd design;    // (T-p) x (p+1)
  VectorXd response;  // T-p
};

LagDesign build_lag_design(const VectorXd& y, int p);

/// Center and scale every row of `raw` to mean 0, sd 1 (sd with denominator
/// T). Rejects zero-variance series by name. Already-standardized rows pass
/// through untouched so the operation is exactly idempotent.
TimePanel standardize_panel(const MatrixXd& raw,
                            std::vector<std::string> names = {},
                            std::vector<std::string> time_index = {});

}  // namespace msfa
