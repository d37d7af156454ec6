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

#ifndef HAMLEARN_UTIL_TOML_HPP
#define HAMLEARN_UTIL_TOML_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

// Reader and writer for the flat subset of TOML used by experiment configs
// and dataset sidecars: [table] and [table.sub] headers, bare or quoted
// keys, basic strings, integers, floats, booleans and single-line arrays of
// those scalars. Inline tables, multi-line strings and dates are rejected.

namespace hamlearn::util {

struct TomlValue;
using TomlArray = std::vector<TomlValue>;

struct TomlValue {
  std::variant<bool, std::int64_t, double, std::string, TomlArray> data;

  bool is_number() const {
    return std::holds_alternative<std::int64_t>(data) || std::holds_alternative<double>(data);
  }
  std::string type_name() const;
};

/// Keys are dotted paths ("split.delta"). Iteration order is sorted.
class TomlDocument {
 public:
  static TomlDocument parse(std::string_view text);

  bool contains(const std::string& key) const { return values_.count(key) != 0; }
  const TomlValue* find(const std::string& key) const;
  void set(const std::string& key, TomlValue value) { values_[key] = std::move(value); }
  void erase(const std::string& key) { values_.erase(key); }
  const std::map<std::string, TomlValue>& values() const { return values_; }

  // Typed getters; throw ConfigError naming the key on a type mismatch.
  std::optional<bool> get_bool(const std::string& key) const;
  std::optional<std::int64_t> get_int(const std::string& key) const;
  std::optional<double> get_double(const std::string& key) const;  // ints widen
  std::optional<std::string> get_string(const std::string& key) const;
  std::optional<std::vector<double>> get_doubles(const std::string& key) const;
  std::optional<std::vector<std::int64_t>> get_ints(const std::string& key) const;

  /// Canonical text: top-level keys first, then one [table] per prefix,
  /// floats printed with 17 significant digits.
  std::string dump() const;

 private:
  std::map<std::string, TomlValue> values_;
};

std::string toml_format(const TomlValue& value);

}  // namespace hamlearn::util

#endif  // HAMLEARN_UTIL_TOML_HPP
