#pragma once

#include "qspec/types.hpp"

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace qspec {

/// Minimal TOML-style config: [table] and [[array-of-tables]] headers,
/// key = string | number | bool | array lines, '#' comments. Keys flatten to
/// dotted paths; array-of-table entries get a numeric path segment.
struct ConfigValue {
    std::variant<bool, double, std::string, std::vector<double>, std::vector<std::string>> v;
    int line = 0;
};

class Config {
  public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    std::string str(const std::string& key) const;
    std::string str_or(const std::string& key, const std::string& fallback) const;
    bool flag_or(const std::string& key, bool fallback) const;
    std::vector<double> numbers(const std::string& key) const;
    std::vector<double> numbers_or(const std::string& key, std::vector<double> fallback) const;

    /// Number of entries of an [[array-of-tables]] with the given prefix.
    int table_count(const std::string& prefix) const;

    const std::string& text() const { return text_; }

  private:
    const ConfigValue& at(const std::string& key) const;
    std::map<std::string, ConfigValue> values_;
    std::string text_;
};

std::string fnv1a64_hex(const std::string& bytes);

}  // namespace qspec
