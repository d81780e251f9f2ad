// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace naec {

// Flat `key = value` configuration. `[section]` lines prefix the keys that
// follow with "section."; `#` and `;` start comments. Keys are looked up by
// their full dotted name.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text,
                              const std::string& origin = "<string>");
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key,
                                  std::vector<double> fallback) const;
  std::vector<std::string> get_strings(const std::string& key) const;
  std::optional<std::string> find(const std::string& key) const;

  // Sub-keys under "prefix." (prefix stripped).
  std::vector<std::string> keys_under(const std::string& prefix) const;

  // Throws ConfigError naming every key never read through a getter.
  void require_all_used() const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  std::string origin_;
  mutable std::set<std::string> used_;
};

// Parses a decimal number; accepts "inf"/"-inf". Throws ConfigError.
double parse_double(const std::string& text, const std::string& what);
std::vector<std::string> split_list(const std::string& text);

}  // namespace naec
