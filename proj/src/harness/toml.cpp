#include "featbench/harness/toml.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "internal/numeric_text.hpp"

namespace featbench::harness {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

// Removes a trailing comment, respecting quoted strings.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') {
      return false;
    }
  }
  return true;
}

std::string parse_basic_string(const std::string& text,
                               const std::string& where) {
  if (text.size() < 2 || text.front() != '"' || text.back() != '"') {
    throw ValidationError("unterminated string at " + where);
  }
  std::string out;
  for (std::size_t i = 1; i + 1 < text.size(); ++i) {
    char c = text[i];
    if (c == '\\') {
      if (i + 2 >= text.size()) {
        throw ValidationError("dangling escape at " + where);
      }
      const char esc = text[++i];
      switch (esc) {
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        default:
          throw ValidationError("unsupported escape at " + where);
      }
    } else if (c == '"') {
      throw ValidationError("stray quote inside string at " + where);
    } else {
      out.push_back(c);
    }
  }
  return out;
}

TomlValue parse_scalar(const std::string& text, const std::string& where) {
  if (!text.empty() && text.front() == '"') {
    return TomlValue{parse_basic_string(text, where)};
  }
  if (text == "true") return TomlValue{true};
  if (text == "false") return TomlValue{false};
  // Integer first, float as fallback.
  try {
    return TomlValue{internal::parse_long(text, where)};
  } catch (const ValidationError&) {
  }
  try {
    return TomlValue{internal::parse_double(text, where)};
  } catch (const ValidationError&) {
  }
  throw ValidationError("unrecognized value \"" + text + "\" at " + where);
}

std::vector<std::string> split_array_items(const std::string& inner,
                                           const std::string& where) {
  std::vector<std::string> items;
  std::string current;
  bool in_string = false;
  for (char c : inner) {
    if (c == '"') in_string = !in_string;
    if (c == ',' && !in_string) {
      items.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (in_string) throw ValidationError("unterminated string at " + where);
  const std::string last = trim(current);
  if (!last.empty()) items.push_back(last);
  for (const std::string& item : items) {
    if (item.empty()) throw ValidationError("empty array item at " + where);
  }
  return items;
}

TomlValue parse_array(const std::string& text, const std::string& where) {
  const std::string inner = trim(text.substr(1, text.size() - 2));
  const auto items = split_array_items(inner, where);
  if (items.empty()) {
    return TomlValue{std::vector<double>{}};  // empty array: numeric default
  }
  if (items.front().front() == '"') {
    std::vector<std::string> values;
    for (const auto& item : items) {
      values.push_back(parse_basic_string(item, where));
    }
    return TomlValue{values};
  }
  std::vector<double> values;
  for (const auto& item : items) {
    const TomlValue v = parse_scalar(item, where);
    if (std::holds_alternative<long>(v.data)) {
      values.push_back(static_cast<double>(std::get<long>(v.data)));
    } else if (std::holds_alternative<double>(v.data)) {
      values.push_back(std::get<double>(v.data));
    } else {
      throw ValidationError("mixed array types at " + where);
    }
  }
  return TomlValue{values};
}

}  // namespace

std::string TomlValue::as_string(const std::string& key) const {
  if (!std::holds_alternative<std::string>(data)) {
    throw ValidationError("config key \"" + key + "\" must be a string");
  }
  return std::get<std::string>(data);
}

long TomlValue::as_int(const std::string& key) const {
  if (!std::holds_alternative<long>(data)) {
    throw ValidationError("config key \"" + key + "\" must be an integer");
  }
  return std::get<long>(data);
}

double TomlValue::as_double(const std::string& key) const {
  if (std::holds_alternative<long>(data)) {
    return static_cast<double>(std::get<long>(data));
  }
  if (!std::holds_alternative<double>(data)) {
    throw ValidationError("config key \"" + key + "\" must be a number");
  }
  return std::get<double>(data);
}

bool TomlValue::as_bool(const std::string& key) const {
  if (!std::holds_alternative<bool>(data)) {
    throw ValidationError("config key \"" + key + "\" must be a boolean");
  }
  return std::get<bool>(data);
}

std::vector<std::string> TomlValue::as_string_array(
    const std::string& key) const {
  if (std::holds_alternative<std::vector<double>>(data) &&
      std::get<std::vector<double>>(data).empty()) {
    return {};
  }
  if (!std::holds_alternative<std::vector<std::string>>(data)) {
    throw ValidationError("config key \"" + key + "\" must be a string array");
  }
  return std::get<std::vector<std::string>>(data);
}

std::vector<double> TomlValue::as_double_array(const std::string& key) const {
  if (!std::holds_alternative<std::vector<double>>(data)) {
    throw ValidationError("config key \"" + key + "\" must be a number array");
  }
  return std::get<std::vector<double>>(data);
}

TomlDocument parse_toml(const std::string& text, const std::string& origin) {
  TomlDocument doc;
  std::string section;  // top-level keys live under ""
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::string where = origin + ":" + std::to_string(line_no);
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ValidationError("malformed section header at " + where);
      }
      section = trim(line.substr(1, line.size() - 2));
      if (!valid_key(section)) {
        throw ValidationError("bad section name at " + where);
      }
      doc[section];  // sections may be empty
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("expected key = value at " + where);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!valid_key(key)) throw ValidationError("bad key name at " + where);
    if (value.empty()) throw ValidationError("missing value at " + where);
    if (doc[section].count(key)) {
      throw ValidationError("duplicate key \"" + key + "\" at " + where);
    }

    if (value.front() == '[') {
      if (value.back() != ']') {
        throw ValidationError("arrays must close on the same line at " + where);
      }
      doc[section].emplace(key, parse_array(value, where));
    } else {
      doc[section].emplace(key, parse_scalar(value, where));
    }
  }
  return doc;
}

TomlDocument load_toml(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("unreadable config file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_toml(buffer.str(), path.string());
}

}  // namespace featbench::harness
