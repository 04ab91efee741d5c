#include "phisolve/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace phisolve {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

[[noreturn]] void bad(const std::string& origin, int line,
                      const std::string& what) {
  fail(ErrorCode::ConfigError,
       origin + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

Config Config::parse_string(const std::string& text,
                            const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const size_t hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) bad(origin, lineno, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) bad(origin, lineno, "empty key");
    if (val.empty()) bad(origin, lineno, "empty value for '" + key + "'");

    if (val.front() == '[') {
      if (val.back() != ']') bad(origin, lineno, "unterminated array");
      std::vector<double> arr;
      std::string body = val.substr(1, val.size() - 2);
      std::istringstream items(body);
      std::string item;
      while (std::getline(items, item, ',')) {
        item = trim(item);
        if (item.empty()) bad(origin, lineno, "empty array element");
        double x;
        if (!parse_number(item, x))
          bad(origin, lineno, "bad array element '" + item + "'");
        arr.push_back(x);
      }
      cfg.values_[key] = std::move(arr);
    } else if (val.front() == '"') {
      if (val.size() < 2 || val.back() != '"')
        bad(origin, lineno, "unterminated string");
      cfg.values_[key] = val.substr(1, val.size() - 2);
    } else if (val == "true" || val == "false") {
      cfg.values_[key] = (val == "true");
    } else {
      double x;
      if (parse_number(val, x))
        cfg.values_[key] = x;
      else
        cfg.values_[key] = val;  // bare string
    }
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ConfigError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

void Config::missing(const std::string& key) const {
  fail(ErrorCode::ConfigError, origin_ + ": missing key '" + key + "'");
}

const Config::Value& Config::require(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) missing(key);
  return it->second;
}

double Config::get_number(const std::string& key) const {
  const Value& v = require(key);
  if (const double* d = std::get_if<double>(&v)) return *d;
  fail(ErrorCode::ConfigError, origin_ + ": '" + key + "' is not a number");
}

double Config::get_number(const std::string& key, double fallback) const {
  return has(key) ? get_number(key) : fallback;
}

int Config::get_int(const std::string& key) const {
  const double d = get_number(key);
  const int i = static_cast<int>(d);
  if (static_cast<double>(i) != d)
    fail(ErrorCode::ConfigError, origin_ + ": '" + key + "' is not an integer");
  return i;
}

int Config::get_int(const std::string& key, int fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const Value& v = require(key);
  if (const bool* b = std::get_if<bool>(&v)) return *b;
  fail(ErrorCode::ConfigError, origin_ + ": '" + key + "' is not a boolean");
}

std::string Config::get_string(const std::string& key) const {
  const Value& v = require(key);
  if (const std::string* s = std::get_if<std::string>(&v)) return *s;
  fail(ErrorCode::ConfigError, origin_ + ": '" + key + "' is not a string");
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

std::vector<double> Config::get_array(const std::string& key) const {
  const Value& v = require(key);
  if (const auto* a = std::get_if<std::vector<double>>(&v)) return *a;
  fail(ErrorCode::ConfigError, origin_ + ": '" + key + "' is not an array");
}

std::vector<std::string> Config::keys_with_prefix(
    const std::string& prefix) const {
  std::vector<std::string> out;
  const std::string dotted = prefix + ".";
  for (const auto& [k, _] : values_)
    if (k.rfind(dotted, 0) == 0) out.push_back(k);
  return out;
}

}  // namespace phisolve
