// Copyright 2026 The hamlearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hamlearn/util/toml.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "hamlearn/error.hpp"

namespace hamlearn::util {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  TomlDocument run() {
    TomlDocument doc;
    std::string table;
    while (!at_end()) {
      skip_blank();
      if (at_end()) break;
      if (peek() == '\n') {
        advance();
        continue;
      }
      if (peek() == '#') {
        skip_comment();
        continue;
      }
      if (peek() == '[') {
        advance();
        if (!at_end() && peek() == '[') fail("arrays of tables are not supported");
        skip_blank();
        table = dotted_key();
        skip_blank();
        expect(']');
        end_line();
        continue;
      }
      const std::string key = dotted_key();
      skip_blank();
      expect('=');
      skip_blank();
      const std::string full = table.empty() ? key : table + "." + key;
      if (doc.contains(full)) fail("duplicate key '" + full + "'");
      doc.set(full, value());
      end_line();
    }
    return doc;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  void advance() {
    if (text_[pos_] == '\n') ++line_;
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("toml line " + std::to_string(line_) + ": " + what);
  }
  void expect(char c) {
    if (at_end() || peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }
  void skip_blank() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) advance();
  }
  void skip_comment() {
    while (!at_end() && peek() != '\n') advance();
  }
  void end_line() {
    skip_blank();
    if (!at_end() && peek() == '#') skip_comment();
    if (at_end()) return;
    if (peek() != '\n') fail("unexpected trailing characters");
    advance();
  }
  std::string bare_or_quoted_key() {
    if (!at_end() && peek() == '"') return basic_string();
    std::string key;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                         peek() == '-')) {
      key += peek();
      advance();
    }
    if (key.empty()) fail("expected a key");
    return key;
  }
  std::string dotted_key() {
    std::string key = bare_or_quoted_key();
    skip_blank();
    while (!at_end() && peek() == '.') {
      advance();
      skip_blank();
      key += "." + bare_or_quoted_key();
      skip_blank();
    }
    return key;
  }
  std::string basic_string() {
    expect('"');
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail("unterminated string");
      const char c = peek();
      advance();
      if (c == '"') break;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (at_end()) fail("unterminated escape");
      const char e = peek();
      advance();
      switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: fail(std::string("unsupported escape \\") + e);
      }
    }
    return out;
  }
  TomlValue value() {
    if (at_end()) fail("missing value");
    const char c = peek();
    if (c == '"') return {basic_string()};
    if (c == '[') {
      advance();
      TomlArray items;
      while (true) {
        skip_blank();
        if (at_end() || peek() == '\n') fail("arrays must be on one line");
        if (peek() == ']') {
          advance();
          break;
        }
        items.push_back(value());
        if (std::holds_alternative<TomlArray>(items.back().data)) fail("nested arrays are not supported");
        skip_blank();
        if (!at_end() && peek() == ',') {
          advance();
          continue;
        }
        skip_blank();
        expect(']');
        break;
      }
      return {items};
    }
    std::string token;
    while (!at_end() && peek() != ',' && peek() != ']' && peek() != '#' && peek() != '\n' &&
           peek() != ' ' && peek() != '\t' && peek() != '\r') {
      token += peek();
      advance();
    }
    if (token == "true") return {true};
    if (token == "false") return {false};
    std::string digits;
    for (char ch : token) {
      if (ch != '_') digits += ch;
    }
    if (digits == "inf" || digits == "+inf") return {HUGE_VAL};
    if (digits == "-inf") return {-HUGE_VAL};
    if (digits == "nan" || digits == "+nan" || digits == "-nan") return {std::nan("")};
    const bool is_float = digits.find_first_of(".eE") != std::string::npos;
    const char* b = digits.data();
    const char* e = b + digits.size();
    if (!digits.empty() && *b == '+') ++b;
    if (is_float) {
      double d = 0;
      auto [p, ec] = std::from_chars(b, e, d);
      if (ec == std::errc() && p == e && b != e) return {d};
    } else {
      std::int64_t i = 0;
      auto [p, ec] = std::from_chars(b, e, i);
      if (ec == std::errc() && p == e && b != e) return {i};
    }
    fail("invalid value '" + token + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

[[noreturn]] void type_error(const std::string& key, const char* want, const TomlValue& got) {
  throw ConfigError("config key '" + key + "' must be " + want + ", got " + got.type_name());
}

}  // namespace

std::string TomlValue::type_name() const {
  switch (data.index()) {
    case 0: return "boolean";
    case 1: return "integer";
    case 2: return "float";
    case 3: return "string";
    default: return "array";
  }
}

TomlDocument TomlDocument::parse(std::string_view text) { return Parser(text).run(); }

const TomlValue* TomlDocument::find(const std::string& key) const {
  auto it = values_.find(key);
  return it == values_.end() ? nullptr : &it->second;
}

std::optional<bool> TomlDocument::get_bool(const std::string& key) const {
  const TomlValue* v = find(key);
  if (!v) return std::nullopt;
  if (auto* b = std::get_if<bool>(&v->data)) return *b;
  type_error(key, "a boolean", *v);
}

std::optional<std::int64_t> TomlDocument::get_int(const std::string& key) const {
  const TomlValue* v = find(key);
  if (!v) return std::nullopt;
  if (auto* i = std::get_if<std::int64_t>(&v->data)) return *i;
  type_error(key, "an integer", *v);
}

std::optional<double> TomlDocument::get_double(const std::string& key) const {
  const TomlValue* v = find(key);
  if (!v) return std::nullopt;
  if (auto* d = std::get_if<double>(&v->data)) return *d;
  if (auto* i = std::get_if<std::int64_t>(&v->data)) return static_cast<double>(*i);
  type_error(key, "a number", *v);
}

std::optional<std::string> TomlDocument::get_string(const std::string& key) const {
  const TomlValue* v = find(key);
  if (!v) return std::nullopt;
  if (auto* s = std::get_if<std::string>(&v->data)) return *s;
  type_error(key, "a string", *v);
}

std::optional<std::vector<double>> TomlDocument::get_doubles(const std::string& key) const {
  const TomlValue* v = find(key);
  if (!v) return std::nullopt;
  const auto* arr = std::get_if<TomlArray>(&v->data);
  if (!arr) type_error(key, "an array of numbers", *v);
  std::vector<double> out;
  for (const auto& item : *arr) {
    if (auto* d = std::get_if<double>(&item.data)) {
      out.push_back(*d);
    } else if (auto* i = std::get_if<std::int64_t>(&item.data)) {
      out.push_back(static_cast<double>(*i));
    } else {
      type_error(key, "an array of numbers", item);
    }
  }
  return out;
}

std::optional<std::vector<std::int64_t>> TomlDocument::get_ints(const std::string& key) const {
  const TomlValue* v = find(key);
  if (!v) return std::nullopt;
  const auto* arr = std::get_if<TomlArray>(&v->data);
  if (!arr) type_error(key, "an array of integers", *v);
  std::vector<std::int64_t> out;
  for (const auto& item : *arr) {
    const auto* i = std::get_if<std::int64_t>(&item.data);
    if (!i) type_error(key, "an array of integers", item);
    out.push_back(*i);
  }
  return out;
}

std::string toml_format(const TomlValue& value) {
  switch (value.data.index()) {
    case 0: return std::get<bool>(value.data) ? "true" : "false";
    case 1: return std::to_string(std::get<std::int64_t>(value.data));
    case 2: return format_double(std::get<double>(value.data));
    case 3: return quote(std::get<std::string>(value.data));
    default: {
      std::string out = "[";
      const auto& arr = std::get<TomlArray>(value.data);
      for (std::size_t i = 0; i < arr.size(); ++i) {
        if (i) out += ", ";
        out += toml_format(arr[i]);
      }
      return out + "]";
    }
  }
}

std::string TomlDocument::dump() const {
  std::map<std::string, std::vector<std::pair<std::string, const TomlValue*>>> tables;
  for (const auto& [key, value] : values_) {
    const auto dot = key.rfind('.');
    if (dot == std::string::npos) {
      tables[""].emplace_back(key, &value);
    } else {
      tables[key.substr(0, dot)].emplace_back(key.substr(dot + 1), &value);
    }
  }
  std::string out;
  for (const auto& [table, entries] : tables) {
    if (!table.empty()) out += (out.empty() ? "[" : "\n[") + table + "]\n";
    for (const auto& [k, v] : entries) out += k + " = " + toml_format(*v) + "\n";
  }
  return out;
}

}  // namespace hamlearn::util
