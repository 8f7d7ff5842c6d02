#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace msfa {

/// Flat sectioned key/value file:
///   [section]
///   key = value     # comment
/// Keys are addressed as "section.key". Unknown keys and missing required
/// keys are collected so a run can report every configuration problem at
/// once.
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text);

  bool has(const std::string& key) const;
  std::optional<std::string> get(const std::string& key) const;

  std::string get_string(const std::string& key);
  std::string get_string(const std::string& key, const std::string& fallback);
  double get_double(const std::string& key, double fallback);
  int get_int(const std::string& key, int fallback);
  bool get_bool(const std::string& key, bool fallback);
  std::vector<double> get_double_list(const std::string& key,
                                      std::vector<double> fallback);

  std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

  /// Keys present in the file but never requested, plus every recorded
  /// problem (missing required key, unparseable value).
  std::vector<std::string> problems() const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
  std::map<std::string, bool> consumed_;
  std::vector<std::string> errors_;
};

}  // namespace msfa
