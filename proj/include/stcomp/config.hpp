#pragma once

// Reader for the flat structured config format: a TOML subset with
//
//   # comment
//   [table]            (dotted names allowed)
//   key = 1.5          numbers, "strings", true/false, [arrays]
//   edges = [[0, 1, 1.0],
//            [1, 2, 1.0]]   arrays may span lines
//
// Keys are addressed as "table.key". Every value remembers its source line so
// that semantic errors can point back into the file.

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stcomp/errors.hpp"

namespace stcomp {

struct ConfigValue {
  using Array = std::vector<ConfigValue>;
  std::variant<double, bool, std::string, Array> data;
  int line = 0;
  bool integral = false;  // number written without fraction or exponent

  bool is_number() const { return std::holds_alternative<double>(data); }
  bool is_bool() const { return std::holds_alternative<bool>(data); }
  bool is_string() const { return std::holds_alternative<std::string>(data); }
  bool is_array() const { return std::holds_alternative<Array>(data); }
};

class ConfigDocument {
 public:
  static ConfigDocument parse(std::string_view text) {
    ConfigDocument doc;
    std::string table;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      const int start_line = line_no;
      std::string line = strip(strip_comment(raw));
      if (line.empty()) continue;
      if (line.front() == '[' && line.find('=') == std::string::npos) {
        if (line.back() != ']' || line.size() < 3) {
          throw ConfigError("malformed table header '" + line + "'", line_no);
        }
        table = strip(line.substr(1, line.size() - 2));
        if (!valid_name(table, true)) {
          throw ConfigError("invalid table name '" + table + "'", line_no);
        }
        doc.tables_.insert(table);
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("expected 'key = value', got '" + line + "'", line_no);
      }
      const std::string key = strip(line.substr(0, eq));
      if (!valid_name(key, false)) throw ConfigError("invalid key '" + key + "'", line_no);
      std::string value_text = strip(line.substr(eq + 1));
      // arrays may continue over several lines until brackets balance
      while (bracket_depth(value_text) > 0) {
        if (!std::getline(in, raw)) {
          throw ConfigError("unterminated array for key '" + key + "'", start_line);
        }
        ++line_no;
        value_text += ' ' + strip(strip_comment(raw));
      }
      const std::string full = table.empty() ? key : table + "." + key;
      if (doc.values_.count(full)) {
        throw ConfigError("duplicate key '" + full + "'", start_line);
      }
      std::size_t pos = 0;
      ConfigValue value = parse_value(value_text, pos, start_line);
      skip_space(value_text, pos);
      if (pos != value_text.size()) {
        throw ConfigError("trailing characters after value of '" + key + "'", start_line);
      }
      doc.order_.push_back(full);
      doc.values_.emplace(full, std::move(value));
    }
    return doc;
  }

  static ConfigDocument load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
      return parse(buffer.str());
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
  }

  bool has(std::string_view key) const { return values_.count(std::string(key)) > 0; }
  bool has_table(std::string_view table) const { return tables_.count(std::string(table)) > 0; }

  const ConfigValue* find(std::string_view key) const {
    auto it = values_.find(std::string(key));
    return it == values_.end() ? nullptr : &it->second;
  }

  const ConfigValue& require(std::string_view key) const {
    if (const auto* v = find(key)) return *v;
    throw ConfigError("missing required key '" + std::string(key) + "'");
  }

  // Keys in file order.
  const std::vector<std::string>& keys() const noexcept { return order_; }

  std::vector<std::string> keys_in(std::string_view table) const {
    std::vector<std::string> out;
    const std::string prefix = std::string(table) + ".";
    for (const auto& k : order_) {
      if (k.rfind(prefix, 0) == 0 && k.find('.', prefix.size()) == std::string::npos) {
        out.push_back(k.substr(prefix.size()));
      }
    }
    return out;
  }

  // Rejects keys in `table` that are not listed in `allowed`.
  void check_keys(std::string_view table, std::initializer_list<std::string_view> allowed) const {
    for (const auto& k : keys_in(table)) {
      bool ok = false;
      for (auto a : allowed) ok = ok || k == a;
      if (!ok) {
        throw ConfigError("unknown key '" + std::string(table) + "." + k + "'",
                          find(std::string(table) + "." + k)->line);
      }
    }
  }

  double number(std::string_view key) const { return as_number(require(key), key); }
  double number(std::string_view key, double fallback) const {
    const auto* v = find(key);
    return v ? as_number(*v, key) : fallback;
  }

  long long integer(std::string_view key) const { return as_integer(require(key), key); }
  long long integer(std::string_view key, long long fallback) const {
    const auto* v = find(key);
    return v ? as_integer(*v, key) : fallback;
  }

  std::string string(std::string_view key) const { return as_string(require(key), key); }
  std::string string(std::string_view key, std::string fallback) const {
    const auto* v = find(key);
    return v ? as_string(*v, key) : fallback;
  }

  bool boolean(std::string_view key, bool fallback) const {
    const auto* v = find(key);
    if (!v) return fallback;
    if (!v->is_bool()) throw ConfigError("'" + std::string(key) + "' must be true or false", v->line);
    return std::get<bool>(v->data);
  }

  std::vector<double> numbers(std::string_view key) const {
    return as_numbers(require(key), key);
  }

  static double as_number(const ConfigValue& v, std::string_view key) {
    if (!v.is_number()) throw ConfigError("'" + std::string(key) + "' must be a number", v.line);
    return std::get<double>(v.data);
  }

  static long long as_integer(const ConfigValue& v, std::string_view key) {
    const double x = as_number(v, key);
    if (!v.integral || std::abs(x) > 9.0e15) {
      throw ConfigError("'" + std::string(key) + "' must be an integer", v.line);
    }
    return static_cast<long long>(x);
  }

  static std::string as_string(const ConfigValue& v, std::string_view key) {
    if (!v.is_string()) throw ConfigError("'" + std::string(key) + "' must be a string", v.line);
    return std::get<std::string>(v.data);
  }

  static std::vector<double> as_numbers(const ConfigValue& v, std::string_view key) {
    if (!v.is_array()) throw ConfigError("'" + std::string(key) + "' must be an array", v.line);
    std::vector<double> out;
    for (const auto& item : std::get<ConfigValue::Array>(v.data)) out.push_back(as_number(item, key));
    return out;
  }

  static const ConfigValue::Array& as_array(const ConfigValue& v, std::string_view key) {
    if (!v.is_array()) throw ConfigError("'" + std::string(key) + "' must be an array", v.line);
    return std::get<ConfigValue::Array>(v.data);
  }

 private:
  static std::string strip(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
  }

  static std::string strip_comment(std::string_view s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '"') quoted = !quoted;
      if (s[i] == '#' && !quoted) return std::string(s.substr(0, i));
    }
    return std::string(s);
  }

  static bool valid_name(std::string_view name, bool dotted) {
    if (name.empty()) return false;
    for (char c : name) {
      const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
                      (dotted && c == '.');
      if (!ok) return false;
    }
    return true;
  }

  static int bracket_depth(std::string_view s) {
    int depth = 0;
    bool quoted = false;
    for (char c : s) {
      if (c == '"') quoted = !quoted;
      if (quoted) continue;
      if (c == '[') ++depth;
      if (c == ']') --depth;
    }
    return depth;
  }

  static void skip_space(std::string_view s, std::size_t& pos) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  static ConfigValue parse_value(std::string_view s, std::size_t& pos, int line) {
    skip_space(s, pos);
    if (pos >= s.size()) throw ConfigError("missing value", line);
    ConfigValue v;
    v.line = line;
    const char c = s[pos];
    if (c == '"') {
      const auto end = s.find('"', pos + 1);
      if (end == std::string_view::npos) throw ConfigError("unterminated string", line);
      v.data = std::string(s.substr(pos + 1, end - pos - 1));
      pos = end + 1;
      return v;
    }
    if (c == '[') {
      ++pos;
      ConfigValue::Array items;
      skip_space(s, pos);
      if (pos < s.size() && s[pos] == ']') {
        ++pos;
        v.data = std::move(items);
        return v;
      }
      while (true) {
        items.push_back(parse_value(s, pos, line));
        skip_space(s, pos);
        if (pos >= s.size()) throw ConfigError("unterminated array", line);
        if (s[pos] == ',') {
          ++pos;
          skip_space(s, pos);
          if (pos < s.size() && s[pos] == ']') {  // trailing comma
            ++pos;
            break;
          }
          continue;
        }
        if (s[pos] == ']') {
          ++pos;
          break;
        }
        throw ConfigError("expected ',' or ']' in array", line);
      }
      v.data = std::move(items);
      return v;
    }
    std::size_t end = pos;
    while (end < s.size() && s[end] != ',' && s[end] != ']' &&
           !std::isspace(static_cast<unsigned char>(s[end]))) {
      ++end;
    }
    const std::string_view token = s.substr(pos, end - pos);
    pos = end;
    if (token == "true" || token == "false") {
      v.data = token == "true";
      return v;
    }
    if (token == "inf" || token == "+inf" || token == "-inf" || token == "nan") {
      v.data = token == "nan" ? std::nan("") : (token[0] == '-' ? -HUGE_VAL : HUGE_VAL);
      return v;
    }
    std::string_view digits = token;
    if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), x);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty()) {
      throw ConfigError("cannot parse value '" + std::string(token) + "'", line);
    }
    v.data = x;
    v.integral = token.find_first_of(".eE") == std::string_view::npos;
    return v;
  }

  std::map<std::string, ConfigValue> values_;
  std::vector<std::string> order_;
  std::set<std::string> tables_;
};

}  // namespace stcomp
