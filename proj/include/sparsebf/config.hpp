#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

// Flat, sectioned key=value configuration (human-diffable).  Keys are
// addressed as "section.key"; unknown keys are rejected by name against a
// schema supplied by the caller.

namespace sparsebf::config {

class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  // "key=value" or "section.key=value"; bare keys land in section "sim".
  void apply_override(const std::string& assignment);

  void reject_unknown_keys(const std::set<std::string>& known) const;

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  long get_long(const std::string& key, long fallback) const;
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& fallback) const;
  std::vector<std::string> get_string_list(const std::string& key,
                                           const std::vector<std::string>& fallback) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace sparsebf::config
