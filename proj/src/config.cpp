#include "stagsrl/config.hpp"

#include <charconv>

#include "stagsrl/error.hpp"

namespace stagsrl {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
  KeyValueConfig cfg;
  std::string current;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ParseError("config line " + std::to_string(line_no) + ": unterminated section");
      }
      current = std::string(trim(line.substr(1, line.size() - 2)));
      cfg.sections_[current];
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError("config line " + std::to_string(line_no) + ": empty key");
    cfg.sections_[current][std::string(key)] = std::string(trim(line.substr(eq + 1)));
  }
  return cfg;
}

ConfigMap KeyValueConfig::section(const std::string& name) const {
  auto it = sections_.find(name);
  return it == sections_.end() ? ConfigMap{} : it->second;
}

std::optional<std::string> KeyValueConfig::get(const std::string& section,
                                               const std::string& key) const {
  auto it = sections_.find(section);
  if (it == sections_.end()) return std::nullopt;
  auto kt = it->second.find(key);
  if (kt == it->second.end()) return std::nullopt;
  return kt->second;
}

void KeyValueConfig::set(const std::string& section, const std::string& key, std::string value) {
  sections_[section][key] = std::move(value);
}

std::string canonical_text(const ConfigMap& m) {
  std::string out;
  for (const auto& [k, v] : m) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

ConfigMap parse_canonical_text(std::string_view text) {
  return KeyValueConfig::parse(text).section("");
}

int config_int(const ConfigMap& m, const std::string& key, int fallback) {
  auto it = m.find(key);
  if (it == m.end()) return fallback;
  int v = 0;
  const auto& s = it->second;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("config key '" + key + "': expected an integer, got '" + s + "'");
  }
  return v;
}

double config_double(const ConfigMap& m, const std::string& key, double fallback) {
  auto it = m.find(key);
  if (it == m.end()) return fallback;
  const std::string& s = it->second;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ParseError("config key '" + key + "': expected a number, got '" + s + "'");
  }
  return v;
}

bool config_bool(const ConfigMap& m, const std::string& key, bool fallback) {
  auto it = m.find(key);
  if (it == m.end()) return fallback;
  const auto& s = it->second;
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ParseError("config key '" + key + "': expected a boolean, got '" + s + "'");
}

std::string config_string(const ConfigMap& m, const std::string& key, const std::string& fallback) {
  auto it = m.find(key);
  return it == m.end() ? fallback : it->second;
}

std::vector<std::string> config_list(const ConfigMap& m, const std::string& key,
                                     const std::vector<std::string>& fallback) {
  auto it = m.find(key);
  return it == m.end() ? fallback : split_list(it->second);
}

std::vector<std::string> split_list(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t p = s.find(sep, start);
    auto item = trim(s.substr(start, p == std::string_view::npos ? p : p - start));
    if (!item.empty()) out.emplace_back(item);
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

std::string join_list(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

}  // namespace stagsrl
