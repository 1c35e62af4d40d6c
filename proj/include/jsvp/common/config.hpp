#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jsvp/common/csv.hpp"
#include "jsvp/common/error.hpp"

namespace jsvp {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(std::string_view s, char sep = ',') {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// INI-style text config:
//
//   # comment
//   key = value
//   [section]
//   other.key = value
//
// Keys inside a section are stored as "section.key". Later assignments to
// the same key replace earlier ones; order of first appearance is kept.
class Config {
 public:
  static Config parse(std::string_view text, std::string_view origin = "<config>") {
    Config cfg;
    std::string section;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      std::string line = trim(text.substr(start, end - start));
      ++line_no;
      start = end + 1;
      if (line.empty() || line[0] == '#' || line[0] == ';') {
        if (end == text.size()) break;
        continue;
      }
      if (line.front() == '[') {
        if (line.back() != ']') {
          throw Error(ErrorCode::Config, std::string(origin) + ":" + std::to_string(line_no) + ": bad section header");
        }
        section = trim(std::string_view(line).substr(1, line.size() - 2));
      } else {
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
          throw Error(ErrorCode::Config, std::string(origin) + ":" + std::to_string(line_no) + ": expected key = value");
        }
        std::string key = trim(std::string_view(line).substr(0, eq));
        if (key.empty()) {
          throw Error(ErrorCode::Config, std::string(origin) + ":" + std::to_string(line_no) + ": empty key");
        }
        if (!section.empty()) key = section + "." + key;
        cfg.set(key, trim(std::string_view(line).substr(eq + 1)));
      }
      if (end == text.size()) break;
    }
    return cfg;
  }

  static Config load(const std::string& path) { return parse(read_file(path), path); }

  void set(const std::string& key, std::string value) {
    if (!values_.count(key)) order_.push_back(key);
    values_[key] = std::move(value);
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::optional<std::string> get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  std::string get_or(const std::string& key, std::string fallback) const {
    auto v = get(key);
    return v ? *v : std::move(fallback);
  }

  double get_number(const std::string& key, double fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    try {
      return parse_number(*v, key);
    } catch (const Error& e) {
      throw Error(ErrorCode::Config, e.what());
    }
  }

  bool get_bool(const std::string& key, bool fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    if (*v == "on" || *v == "true" || *v == "yes" || *v == "1") return true;
    if (*v == "off" || *v == "false" || *v == "no" || *v == "0") return false;
    throw Error(ErrorCode::Config, "key '" + key + "' expects on/off, got '" + *v + "'");
  }

  // Keys in first-appearance order.
  const std::vector<std::string>& keys() const { return order_; }

  std::vector<std::string> keys_with_prefix(std::string_view prefix) const {
    std::vector<std::string> out;
    for (const auto& k : order_) {
      if (k.size() > prefix.size() && k.compare(0, prefix.size(), prefix) == 0) out.push_back(k);
    }
    return out;
  }

 private:
  std::map<std::string, std::string> values_;
  std::vector<std::string> order_;
};

}  // namespace jsvp
