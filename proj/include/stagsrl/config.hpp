#pragma once

// Flat "key = value" configuration text with optional [section] headers.
// Lines starting with '#' are comments. Keys before the first header belong
// to the unnamed section "".

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stagsrl {

using ConfigMap = std::map<std::string, std::string>;

class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text);

  // Empty map if the section does not exist.
  ConfigMap section(const std::string& name) const;
  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  void set(const std::string& section, const std::string& key, std::string value);
  const std::map<std::string, ConfigMap>& sections() const { return sections_; }

 private:
  std::map<std::string, ConfigMap> sections_;
};

// Canonical text: keys sorted, one "key = value" per line.
std::string canonical_text(const ConfigMap& m);
ConfigMap parse_canonical_text(std::string_view text);

// Typed accessors; throw ParseError naming the key when the value is bad.
int config_int(const ConfigMap& m, const std::string& key, int fallback);
double config_double(const ConfigMap& m, const std::string& key, double fallback);
bool config_bool(const ConfigMap& m, const std::string& key, bool fallback);
std::string config_string(const ConfigMap& m, const std::string& key, const std::string& fallback);
std::vector<std::string> config_list(const ConfigMap& m, const std::string& key,
                                     const std::vector<std::string>& fallback);

std::vector<std::string> split_list(std::string_view s, char sep = ',');
std::string join_list(const std::vector<std::string>& items, char sep = ',');
// Shortest text that parses back to the same double.
std::string format_double(double v);

}  // namespace stagsrl
