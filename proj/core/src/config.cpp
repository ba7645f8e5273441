#include "wkot/config.hpp"

#include <cctype>
#include <cstddef>
#include <fstream>
#include <sstream>

namespace wkot {

namespace {

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& what) {
  throw DomainError("config: " + origin + ":" + std::to_string(line) + ": " + what);
}

std::string strip(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Removes a trailing comment, respecting quoted strings.
std::string drop_comment(const std::string& s) {
  bool in_str = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char ch = s[i];
    if (ch == '"' && (i == 0 || s[i - 1] != '\\')) in_str = !in_str;
    if (ch == '#' && !in_str) return s.substr(0, i);
  }
  return s;
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char ch : k)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '-') return false;
  return true;
}

std::string parse_string_token(const std::string& tok, const std::string& origin,
                               std::size_t line) {
  if (tok.size() < 2 || tok.front() != '"' || tok.back() != '"')
    fail(origin, line, "malformed string: " + tok);
  std::string out;
  for (std::size_t i = 1; i + 1 < tok.size(); ++i) {
    if (tok[i] == '\\' && i + 2 < tok.size() && (tok[i + 1] == '"' || tok[i + 1] == '\\')) {
      out.push_back(tok[i + 1]);
      ++i;
    } else if (tok[i] == '"') {
      fail(origin, line, "unescaped quote inside string");
    } else {
      out.push_back(tok[i]);
    }
  }
  return out;
}

bool parse_number_token(const std::string& tok, double& out) {
  if (tok.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stod(tok, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == tok.size();
}

// Splits a [...] body at top-level commas (strings may contain commas).
std::vector<std::string> split_array(const std::string& body, const std::string& origin,
                                     std::size_t line) {
  std::vector<std::string> parts;
  std::string cur;
  bool in_str = false;
  for (std::size_t i = 0; i < body.size(); ++i) {
    char ch = body[i];
    if (ch == '"' && (i == 0 || body[i - 1] != '\\')) in_str = !in_str;
    if (ch == ',' && !in_str) {
      parts.push_back(strip(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (in_str) fail(origin, line, "unterminated string in array");
  std::string last = strip(cur);
  if (!last.empty()) parts.push_back(last);
  for (const std::string& p : parts)
    if (p.empty()) fail(origin, line, "empty array element");
  return parts;
}

TomlValue parse_value(const std::string& tok, const std::string& origin, std::size_t line) {
  TomlValue v;
  if (tok.empty()) fail(origin, line, "missing value");
  if (tok.front() == '"') {
    v.kind = TomlValue::Kind::string_v;
    v.s = parse_string_token(tok, origin, line);
    return v;
  }
  if (tok == "true" || tok == "false") {
    v.kind = TomlValue::Kind::bool_v;
    v.b = tok == "true";
    return v;
  }
  if (tok.front() == '[') {
    if (tok.back() != ']') fail(origin, line, "unterminated array");
    std::vector<std::string> parts = split_array(tok.substr(1, tok.size() - 2), origin, line);
    if (parts.empty()) {
      v.kind = TomlValue::Kind::number_list;
      return v;
    }
    if (parts.front().front() == '"') {
      v.kind = TomlValue::Kind::string_list;
      for (const std::string& p : parts) v.strs.push_back(parse_string_token(p, origin, line));
      return v;
    }
    v.kind = TomlValue::Kind::number_list;
    for (const std::string& p : parts) {
      double d = 0.0;
      if (!parse_number_token(p, d)) fail(origin, line, "bad number in array: " + p);
      v.nums.push_back(d);
    }
    return v;
  }
  double d = 0.0;
  if (parse_number_token(tok, d)) {
    v.kind = TomlValue::Kind::number_v;
    v.num = d;
    return v;
  }
  fail(origin, line, "unrecognized value: " + tok);
}

const char* kind_name(TomlValue::Kind k) {
  switch (k) {
    case TomlValue::Kind::string_v: return "string";
    case TomlValue::Kind::number_v: return "number";
    case TomlValue::Kind::bool_v: return "boolean";
    case TomlValue::Kind::number_list: return "number array";
    case TomlValue::Kind::string_list: return "string array";
  }
  return "?";
}

}  // namespace

Toml Toml::parse(const std::string& text, const std::string& origin) {
  Toml out;
  out.origin_ = origin;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = strip(drop_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(origin, lineno, "unterminated section header");
      section = strip(line.substr(1, line.size() - 2));
      if (!valid_key(section)) fail(origin, lineno, "bad section name: " + section);
      out.data_[section];  // a section may legitimately stay empty
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(origin, lineno, "expected key = value");
    std::string key = strip(line.substr(0, eq));
    if (!valid_key(key)) fail(origin, lineno, "bad key: " + key);
    if (out.data_[section].count(key)) fail(origin, lineno, "duplicate key: " + key);
    out.data_[section][key] = parse_value(strip(line.substr(eq + 1)), origin, lineno);
  }
  return out;
}

Toml Toml::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

const TomlValue* Toml::find(const std::string& section, const std::string& key) const {
  auto sec = data_.find(section);
  if (sec == data_.end()) return nullptr;
  auto it = sec->second.find(key);
  return it == sec->second.end() ? nullptr : &it->second;
}

const TomlValue& Toml::require(const std::string& section, const std::string& key,
                               TomlValue::Kind kind) const {
  const TomlValue* v = find(section, key);
  if (!v)
    throw DomainError("config: " + origin_ + ": missing required key [" + section + "] " + key);
  if (v->kind != kind)
    throw DomainError("config: " + origin_ + ": [" + section + "] " + key + " must be a " +
                      kind_name(kind) + ", got " + kind_name(v->kind));
  return *v;
}

bool Toml::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

std::string Toml::str(const std::string& section, const std::string& key,
                      const std::string& fallback) const {
  return find(section, key) ? require(section, key, TomlValue::Kind::string_v).s : fallback;
}

std::string Toml::str_req(const std::string& section, const std::string& key) const {
  return require(section, key, TomlValue::Kind::string_v).s;
}

double Toml::num(const std::string& section, const std::string& key, double fallback) const {
  return find(section, key) ? require(section, key, TomlValue::Kind::number_v).num : fallback;
}

double Toml::num_req(const std::string& section, const std::string& key) const {
  return require(section, key, TomlValue::Kind::number_v).num;
}

bool Toml::flag(const std::string& section, const std::string& key, bool fallback) const {
  return find(section, key) ? require(section, key, TomlValue::Kind::bool_v).b : fallback;
}

std::vector<double> Toml::nums(const std::string& section, const std::string& key,
                               std::vector<double> fallback) const {
  return find(section, key) ? require(section, key, TomlValue::Kind::number_list).nums
                            : fallback;
}

std::vector<std::string> Toml::strs(const std::string& section, const std::string& key,
                                    std::vector<std::string> fallback) const {
  return find(section, key) ? require(section, key, TomlValue::Kind::string_list).strs
                            : fallback;
}

std::vector<std::string> Toml::sections() const {
  std::vector<std::string> out;
  for (const auto& [name, kv] : data_) out.push_back(name);
  return out;
}

}  // namespace wkot
