#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "featbench/errors.hpp"

namespace featbench::harness {

// Minimal TOML subset: [section] headers, key = value lines, '#' comments.
// Values are strings, integers, floats, booleans, and flat homogeneous
// arrays thereof. Covers everything a run config needs; nested tables and
// multi-line syntax are deliberately unsupported.

struct TomlValue {
  std::variant<std::string, long, double, bool,
               std::vector<std::string>, std::vector<double>>
      data;

  bool is_string() const { return std::holds_alternative<std::string>(data); }

  std::string as_string(const std::string& key) const;
  long as_int(const std::string& key) const;
  double as_double(const std::string& key) const;  // accepts integers too
  bool as_bool(const std::string& key) const;
  std::vector<std::string> as_string_array(const std::string& key) const;
  std::vector<double> as_double_array(const std::string& key) const;
};

using TomlTable = std::map<std::string, TomlValue>;
using TomlDocument = std::map<std::string, TomlTable>;

TomlDocument parse_toml(const std::string& text, const std::string& origin);
TomlDocument load_toml(const std::filesystem::path& path);

}  // namespace featbench::harness
