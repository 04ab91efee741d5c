#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "phisolve/errors.hpp"

namespace phisolve {

/// Flat key/value config with dotted sections, e.g.
///   operator.kind = "power_sum"
///   exponents.alpha = 0.3
///   sweep.theta = [1e-3, 1.0, 24]
/// Values are numbers, booleans, quoted or bare strings, or numeric arrays.
/// '#' starts a comment. Parse errors throw ConfigError with line diagnostics.
class Config {
 public:
  using Value = std::variant<double, bool, std::string, std::vector<double>>;

  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text,
                             const std::string& origin = "<string>");

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  double get_number(const std::string& key) const;
  double get_number(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  std::vector<double> get_array(const std::string& key) const;

  /// All keys sharing a dotted prefix, e.g. prefix "operator".
  std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

  const std::string& origin() const { return origin_; }

 private:
  [[noreturn]] void missing(const std::string& key) const;
  const Value& require(const std::string& key) const;

  std::map<std::string, Value> values_;
  std::string origin_;
};

}  // namespace phisolve
