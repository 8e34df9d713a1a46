// Copyright 2026 The annealsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace annealsim {

class TomlError : public std::runtime_error {
 public:
  TomlError(const std::string& what, std::size_t line) : std::runtime_error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Parses the TOML subset used by run configurations into a JSON object:
/// comments, [tables] and [dotted.tables], bare, quoted and dotted keys,
/// basic and literal strings, integers, floats (including inf and nan),
/// booleans, nested and multi-line arrays, and inline tables. Dates,
/// multi-line strings and arrays of tables are rejected.
nlohmann::json parse_toml(std::string_view text);

}  // namespace annealsim
