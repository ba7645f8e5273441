#pragma once

// Minimal TOML-subset reader for scenario configs: [section] headers, comments,
// and key = value lines where a value is a quoted string, number, boolean, or
// a homogeneous array of numbers/strings.  That subset covers every config this
// project ships; anything else is rejected with a file:line diagnostic.

#include "wkot/common.hpp"

#include <map>
#include <string>
#include <vector>

namespace wkot {

struct TomlValue {
  enum class Kind { string_v, number_v, bool_v, number_list, string_list };
  Kind kind = Kind::string_v;
  std::string s;
  double num = 0.0;
  bool b = false;
  std::vector<double> nums;
  std::vector<std::string> strs;
};

class Toml {
 public:
  static Toml parse_file(const std::string& path);
  static Toml parse(const std::string& text, const std::string& origin);

  bool has(const std::string& section, const std::string& key) const;

  // Typed getters; the *_req variants throw DomainError naming section.key.
  std::string str(const std::string& section, const std::string& key,
                  const std::string& fallback) const;
  std::string str_req(const std::string& section, const std::string& key) const;
  double num(const std::string& section, const std::string& key, double fallback) const;
  double num_req(const std::string& section, const std::string& key) const;
  bool flag(const std::string& section, const std::string& key, bool fallback) const;
  std::vector<double> nums(const std::string& section, const std::string& key,
                           std::vector<double> fallback = {}) const;
  std::vector<std::string> strs(const std::string& section, const std::string& key,
                                std::vector<std::string> fallback = {}) const;

  std::vector<std::string> sections() const;
  std::string origin() const { return origin_; }

 private:
  const TomlValue* find(const std::string& section, const std::string& key) const;
  const TomlValue& require(const std::string& section, const std::string& key,
                           TomlValue::Kind kind) const;

  std::map<std::string, std::map<std::string, TomlValue>> data_;
  std::string origin_;
};

}  // namespace wkot
