#include "msfa/ingest.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "msfa/panel.hpp"

namespace msfa {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_missing_token(const std::string& s) {
  if (s.empty() || s == "." || s == "NA" || s == "NaN" || s == "nan" || s == "#N/A")
    return true;
  return false;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

}  // namespace

void IngestionSpec::validate() const {
  if (csv_path.empty()) throw ConfigError("IngestionSpec: csv path missing");
  if (target_column.empty()) throw ConfigError("IngestionSpec: target column missing");
  auto check_code = [](int c) {
    if (c < 1 || c > 7) throw ConfigError("IngestionSpec: transformation codes must be in 1..7");
  };
  check_code(target_code);
  check_code(default_code);
  for (const auto& [name, c] : codes) check_code(c);
  if (na_tolerance < 0.0 || na_tolerance > 1.0)
    throw ConfigError("IngestionSpec: NA tolerance must be in [0,1]");
}

VectorXd apply_transform(const VectorXd& x, int code) {
  const int T = static_cast<int>(x.size());
  VectorXd out = VectorXd::Constant(T, kNaN);
  auto diff = [&](const VectorXd& v) {
    VectorXd d = VectorXd::Constant(T, kNaN);
    for (int t = 1; t < T; ++t) d[t] = v[t] - v[t - 1];
    return d;
  };
  auto logv = [&](const VectorXd& v) {
    VectorXd l(T);
    for (int t = 0; t < T; ++t) l[t] = v[t] > 0.0 ? std::log(v[t]) : kNaN;
    return l;
  };
  switch (code) {
    case 1:
      out = x;
      break;
    case 2:
      out = diff(x);
      break;
    case 3:
      out = diff(diff(x));
      break;
    case 4:
      out = logv(x);
      break;
    case 5:
      out = diff(logv(x));
      break;
    case 6:
      out = diff(diff(logv(x)));
      break;
    case 7: {
      VectorXd pct = VectorXd::Constant(T, kNaN);
      for (int t = 1; t < T; ++t)
        pct[t] = x[t - 1] != 0.0 ? x[t] / x[t - 1] - 1.0 : kNaN;
      out = diff(pct);
      break;
    }
    default:
      throw ConfigError("apply_transform: unknown code");
  }
  return out;
}

IngestResult ingest(const IngestionSpec& spec) {
  spec.validate();
  std::ifstream in(spec.csv_path);
  if (!in) throw ConfigError("ingest: cannot open " + spec.csv_path);

  std::string line;
  if (!std::getline(in, line)) throw ConfigError("ingest: empty file");
  const std::vector<std::string> header = split_csv_line(line);
  const int n_cols = static_cast<int>(header.size());
  if (n_cols < 2) throw ConfigError("ingest: need a date column and at least one series");

  int date_col = 0;
  if (!spec.date_column.empty()) {
    date_col = -1;
    for (int c = 0; c < n_cols; ++c)
      if (header[c] == spec.date_column) date_col = c;
    if (date_col < 0) throw ConfigError("ingest: unknown date column " + spec.date_column);
  }
  int target_col = -1;
  for (int c = 0; c < n_cols; ++c)
    if (header[c] == spec.target_column) target_col = c;
  if (target_col < 0) throw ConfigError("ingest: unknown target column " + spec.target_column);
  for (const auto& [name, code] : spec.codes) {
    bool found = false;
    for (const auto& h : header) found = found || h == name;
    if (!found) throw ConfigError("ingest: transformation code given for unknown column " + name);
  }

  std::vector<std::string> dates;
  std::vector<std::vector<double>> raw(n_cols);
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (static_cast<int>(cells.size()) != n_cols)
      throw ConfigError("ingest: line " + std::to_string(line_no) + " has " +
                        std::to_string(cells.size()) + " fields, expected " +
                        std::to_string(n_cols));
    dates.push_back(cells[date_col]);
    for (int c = 0; c < n_cols; ++c) {
      if (c == date_col) continue;
      if (is_missing_token(cells[c])) {
        raw[c].push_back(kNaN);
      } else {
        try {
          raw[c].push_back(std::stod(cells[c]));
        } catch (const std::exception&) {
          throw ConfigError("ingest: line " + std::to_string(line_no) +
                            ": cannot parse value '" + cells[c] + "'");
        }
      }
    }
  }
  const int T_raw = static_cast<int>(dates.size());
  if (T_raw < 3) throw ConfigError("ingest: too few data rows");

  // drop over-missing covariate series before transforming
  std::vector<int> keep;
  std::vector<std::string> dropped;
  for (int c = 0; c < n_cols; ++c) {
    if (c == date_col || c == target_col) continue;
    int n_na = 0;
    for (double v : raw[c]) n_na += std::isnan(v);
    if (n_na / static_cast<double>(T_raw) > spec.na_tolerance)
      dropped.push_back(header[c]);
    else
      keep.push_back(c);
  }
  if (keep.empty()) throw ConfigError("ingest: every covariate series was dropped");
  {
    int n_na = 0;
    for (double v : raw[target_col]) n_na += std::isnan(v);
    if (n_na == T_raw) throw ConfigError("ingest: target column is all missing");
  }

  auto code_for = [&](const std::string& name) {
    const auto it = spec.codes.find(name);
    return it != spec.codes.end() ? it->second : spec.default_code;
  };

  const int m = static_cast<int>(keep.size());
  MatrixXd transformed(m + 1, T_raw);  // target in last row for joint trimming
  for (int i = 0; i < m; ++i) {
    Eigen::Map<const VectorXd> col(raw[keep[i]].data(), T_raw);
    transformed.row(i) = apply_transform(col, code_for(header[keep[i]])).transpose();
  }
  {
    Eigen::Map<const VectorXd> col(raw[target_col].data(), T_raw);
    transformed.row(m) = apply_transform(col, spec.target_code).transpose();
  }

  // align all series on the largest window with no missing values at the edges
  int lo = 0, hi = T_raw - 1;
  auto row_has_na = [&](int t) {
    for (int i = 0; i <= m; ++i)
      if (std::isnan(transformed(i, t))) return true;
    return false;
  };
  while (lo <= hi && row_has_na(lo)) ++lo;
  while (hi >= lo && row_has_na(hi)) --hi;
  const int T = hi - lo + 1;
  if (T < 3) throw ConfigError("ingest: no usable window after transformation");
  for (int t = lo; t <= hi; ++t)
    if (row_has_na(t))
      throw ConfigError("ingest: interior missing value at row " + dates[t] +
                        " survived the NA rule");

  std::vector<std::string> names(m);
  for (int i = 0; i < m; ++i) names[i] = header[keep[i]];
  IngestResult out;
  out.dropped = std::move(dropped);
  out.panel = standardize_panel(transformed.block(0, lo, m, T), names,
                                std::vector<std::string>(dates.begin() + lo,
                                                         dates.begin() + hi + 1));
  out.panel.target = transformed.block(m, lo, 1, T).transpose();
  return out;
}

}  // namespace msfa
