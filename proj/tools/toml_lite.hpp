#ifndef BP_TOOLS_TOML_LITE_HPP
#define BP_TOOLS_TOML_LITE_HPP

// Minimal TOML reader covering the subset used by run configs: dotted
// [section] headers, key = value with strings, booleans, numbers and flat
// arrays, and # comments. Produces the JSON-equivalent document.

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace toml_lite {

struct TomlError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

inline nlohmann::json parse_scalar(const std::string& raw, int lineno) {
  const std::string v = trim(raw);
  if (v.empty()) throw TomlError("toml: empty value on line " + std::to_string(lineno));
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"')
      throw TomlError("toml: unterminated string on line " + std::to_string(lineno));
    return v.substr(1, v.size() - 2);
  }
  if (v == "true") return true;
  if (v == "false") return false;
  try {
    std::size_t used = 0;
    if (v.find_first_of(".eE") == std::string::npos &&
        v.find("inf") == std::string::npos && v.find("nan") == std::string::npos) {
      const long long i = std::stoll(v, &used);
      if (used == v.size()) return i;
    }
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw TomlError("toml: bad value '" + v + "' on line " + std::to_string(lineno));
}

inline nlohmann::json parse_value(const std::string& raw, int lineno) {
  const std::string v = trim(raw);
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']')
      throw TomlError("toml: unterminated array on line " + std::to_string(lineno));
    nlohmann::json arr = nlohmann::json::array();
    std::string body = v.substr(1, v.size() - 2);
    std::istringstream items(body);
    std::string item;
    while (std::getline(items, item, ','))
      if (!trim(item).empty()) arr.push_back(parse_scalar(item, lineno));
    return arr;
  }
  return parse_scalar(v, lineno);
}

}  // namespace detail

inline nlohmann::json parse(std::istream& in) {
  using detail::trim;
  nlohmann::json doc = nlohmann::json::object();
  nlohmann::json* section = &doc;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(detail::strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw TomlError("toml: bad section header on line " + std::to_string(lineno));
      std::string path = trim(line.substr(1, line.size() - 2));
      if (path.empty())
        throw TomlError("toml: empty section name on line " + std::to_string(lineno));
      section = &doc;
      std::istringstream parts(path);
      std::string part;
      while (std::getline(parts, part, '.')) {
        part = trim(part);
        if (part.empty())
          throw TomlError("toml: bad section name on line " + std::to_string(lineno));
        section = &(*section)[part];
        if (!section->is_object() && !section->is_null())
          throw TomlError("toml: section clashes with key on line " +
                          std::to_string(lineno));
      }
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw TomlError("toml: expected key = value on line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw TomlError("toml: empty key on line " + std::to_string(lineno));
    (*section)[key] = detail::parse_value(line.substr(eq + 1), lineno);
  }
  return doc;
}

inline nlohmann::json parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw TomlError("toml: cannot open " + path);
  return parse(f);
}

}  // namespace toml_lite

#endif
