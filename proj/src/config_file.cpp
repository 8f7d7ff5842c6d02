#include "msfa/config_file.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "msfa/types.hpp"

namespace msfa {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

ConfigFile ConfigFile::parse_string(const std::string& text) {
  ConfigFile cfg;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config: malformed section at line " + std::to_string(line_no));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected key = value at line " + std::to_string(line_no));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config: empty key at line " + std::to_string(line_no));
    const std::string full = section.empty() ? key : section + "." + key;
    if (cfg.entries_.count(full))
      throw ConfigError("config: duplicate key " + full);
    cfg.entries_[full] = value;
    cfg.consumed_[full] = false;
  }
  return cfg;
}

bool ConfigFile::has(const std::string& key) const { return entries_.count(key) > 0; }

std::optional<std::string> ConfigFile::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string ConfigFile::get_string(const std::string& key) {
  const auto it = entries_.find(key);
  if (it == entries_.end()) {
    errors_.push_back("missing required key: " + key);
    return "";
  }
  consumed_[key] = true;
  return it->second;
}

std::string ConfigFile::get_string(const std::string& key, const std::string& fallback) {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  consumed_[key] = true;
  return it->second;
}

double ConfigFile::get_double(const std::string& key, double fallback) {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  consumed_[key] = true;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    errors_.push_back("key " + key + ": cannot parse '" + it->second + "' as number");
    return fallback;
  }
}

int ConfigFile::get_int(const std::string& key, int fallback) {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  consumed_[key] = true;
  try {
    return std::stoi(it->second);
  } catch (const std::exception&) {
    errors_.push_back("key " + key + ": cannot parse '" + it->second + "' as integer");
    return fallback;
  }
}

bool ConfigFile::get_bool(const std::string& key, bool fallback) {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  consumed_[key] = true;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  errors_.push_back("key " + key + ": cannot parse '" + v + "' as boolean");
  return fallback;
}

std::vector<double> ConfigFile::get_double_list(const std::string& key,
                                                std::vector<double> fallback) {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  consumed_[key] = true;
  std::vector<double> out;
  std::istringstream in(it->second);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      out.push_back(std::stod(trim(tok)));
    } catch (const std::exception&) {
      errors_.push_back("key " + key + ": cannot parse '" + tok + "' as number");
      return fallback;
    }
  }
  if (out.empty()) {
    errors_.push_back("key " + key + ": empty list");
    return fallback;
  }
  return out;
}

std::vector<std::string> ConfigFile::keys_with_prefix(const std::string& prefix) const {
  std::vector<std::string> out;
  for (const auto& [key, value] : entries_)
    if (key.rfind(prefix, 0) == 0) out.push_back(key);
  return out;
}

std::vector<std::string> ConfigFile::problems() const {
  std::vector<std::string> out = errors_;
  for (const auto& [key, value] : entries_)
    if (!consumed_.at(key)) out.push_back("unknown key: " + key);
  return out;
}

}  // namespace msfa
