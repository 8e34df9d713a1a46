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

#include "annealsim/toml.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <vector>

namespace annealsim {

namespace {

using nlohmann::json;

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  json parse() {
    json root = json::object();
    json* table = &root;
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        table = &open_table(root);
      } else {
        parse_key_value(*table);
      }
      end_of_line();
    }
    return root;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::vector<std::string> defined_tables_;

  [[noreturn]] void fail(const std::string& msg) const {
    throw TomlError("line " + std::to_string(line_) + ": " + msg, line_);
  }
  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[pos_]; }
  char get() {
    if (eof()) fail("unexpected end of input");
    char c = s_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  void skip_spaces() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }
  void skip_comment() {
    if (peek() == '#') {
      while (!eof() && peek() != '\n') ++pos_;
    }
  }
  void skip_blank_lines() {
    while (!eof()) {
      skip_spaces();
      skip_comment();
      if (peek() == '\r') ++pos_;
      if (peek() == '\n') {
        get();
        continue;
      }
      break;
    }
  }
  // Whitespace, comments and newlines inside arrays.
  void skip_array_space() {
    while (!eof()) {
      skip_spaces();
      skip_comment();
      if (peek() == '\r' || peek() == '\n') {
        get();
        continue;
      }
      break;
    }
  }
  void end_of_line() {
    skip_spaces();
    skip_comment();
    if (peek() == '\r') ++pos_;
    if (eof()) return;
    if (peek() != '\n') fail(std::string("unexpected '") + peek() + "' after value");
    get();
  }

  static bool bare_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  }

  std::vector<std::string> parse_key() {
    std::vector<std::string> parts;
    while (true) {
      skip_spaces();
      if (peek() == '"') {
        parts.push_back(parse_basic_string());
      } else if (peek() == '\'') {
        parts.push_back(parse_literal_string());
      } else {
        std::size_t start = pos_;
        while (!eof() && bare_char(peek())) ++pos_;
        if (pos_ == start) fail("expected a key");
        parts.emplace_back(s_.substr(start, pos_ - start));
      }
      skip_spaces();
      if (peek() != '.') break;
      ++pos_;
    }
    return parts;
  }

  static std::string join(const std::vector<std::string>& parts, std::size_t n) {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) out += (i ? "." : "") + parts[i];
    return out;
  }

  json& descend(json& root, const std::vector<std::string>& parts, std::size_t n) {
    json* cur = &root;
    for (std::size_t i = 0; i < n; ++i) {
      json& next = (*cur)[parts[i]];
      if (next.is_null()) next = json::object();
      if (!next.is_object()) fail("key '" + join(parts, i + 1) + "' is not a table");
      cur = &next;
    }
    return *cur;
  }

  json& open_table(json& root) {
    get();  // '['
    if (peek() == '[') fail("arrays of tables are not supported");
    auto parts = parse_key();
    if (get() != ']') fail("expected ']' to close table header");
    const std::string name = join(parts, parts.size());
    for (const auto& d : defined_tables_) {
      if (d == name) fail("table [" + name + "] defined twice");
    }
    defined_tables_.push_back(name);
    return descend(root, parts, parts.size());
  }

  void parse_key_value(json& table) {
    auto parts = parse_key();
    if (get() != '=') fail("expected '=' after key '" + join(parts, parts.size()) + "'");
    skip_spaces();
    json value = parse_value();
    json& parent = descend(table, parts, parts.size() - 1);
    if (parent.contains(parts.back())) fail("duplicate key '" + join(parts, parts.size()) + "'");
    parent[parts.back()] = std::move(value);
  }

  json parse_value() {
    const char c = peek();
    if (c == '"') {
      if (s_.substr(pos_, 3) == "\"\"\"") fail("multi-line strings are not supported");
      return parse_basic_string();
    }
    if (c == '\'') return parse_literal_string();
    if (c == '[') return parse_array();
    if (c == '{') return parse_inline_table();
    if (s_.substr(pos_, 4) == "true" && !bare_char(s_.size() > pos_ + 4 ? s_[pos_ + 4] : ' ')) {
      pos_ += 4;
      return true;
    }
    if (s_.substr(pos_, 5) == "false" && !bare_char(s_.size() > pos_ + 5 ? s_[pos_ + 5] : ' ')) {
      pos_ += 5;
      return false;
    }
    return parse_number();
  }

  std::string parse_basic_string() {
    get();  // opening quote
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = get();
      if (c == '"') break;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      char e = get();
      switch (e) {
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case 'r': out.push_back('\r'); break;
        case 'b': out.push_back('\b'); break;
        case 'f': out.push_back('\f'); break;
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        case 'u':
        case 'U': append_unicode(out, e == 'u' ? 4 : 8); break;
        default: fail(std::string("invalid escape '\\") + e + "'");
      }
    }
    return out;
  }

  void append_unicode(std::string& out, int digits) {
    if (pos_ + static_cast<std::size_t>(digits) > s_.size()) fail("truncated unicode escape");
    std::uint32_t cp = 0;
    auto res = std::from_chars(s_.data() + pos_, s_.data() + pos_ + digits, cp, 16);
    if (res.ec != std::errc() || res.ptr != s_.data() + pos_ + digits) fail("invalid unicode escape");
    pos_ += static_cast<std::size_t>(digits);
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) fail("invalid unicode scalar");
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }

  std::string parse_literal_string() {
    get();
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = get();
      if (c == '\'') break;
      out.push_back(c);
    }
    return out;
  }

  json parse_array() {
    get();  // '['
    json arr = json::array();
    while (true) {
      skip_array_space();
      if (peek() == ']') {
        get();
        return arr;
      }
      arr.push_back(parse_value());
      skip_array_space();
      char c = get();
      if (c == ']') return arr;
      if (c != ',') fail("expected ',' or ']' in array");
    }
  }

  json parse_inline_table() {
    get();  // '{'
    json t = json::object();
    skip_spaces();
    if (peek() == '}') {
      get();
      return t;
    }
    while (true) {
      auto parts = parse_key();
      if (get() != '=') fail("expected '=' in inline table");
      skip_spaces();
      json value = parse_value();
      json& parent = descend(t, parts, parts.size() - 1);
      if (parent.contains(parts.back())) fail("duplicate key '" + join(parts, parts.size()) + "'");
      parent[parts.back()] = std::move(value);
      skip_spaces();
      char c = get();
      if (c == '}') return t;
      if (c != ',') fail("expected ',' or '}' in inline table");
      skip_spaces();
    }
  }

  json parse_number() {
    std::size_t start = pos_;
    while (!eof() && (bare_char(peek()) || peek() == '+' || peek() == '.')) ++pos_;
    std::string tok(s_.substr(start, pos_ - start));
    if (tok.empty()) fail("expected a value");
    std::string body;
    for (std::size_t i = 0; i < tok.size(); ++i) {
      if (tok[i] != '_') {
        body.push_back(tok[i]);
        continue;
      }
      const bool ok = i > 0 && i + 1 < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i - 1])) &&
                      std::isdigit(static_cast<unsigned char>(tok[i + 1]));
      if (!ok) fail("misplaced '_' in number '" + tok + "'");
    }
    std::string mag = body;
    bool negative = false;
    if (!mag.empty() && (mag[0] == '+' || mag[0] == '-')) {
      negative = mag[0] == '-';
      mag.erase(0, 1);
    }
    if (mag == "inf") return negative ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    if (mag == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (mag.empty() || !std::isdigit(static_cast<unsigned char>(mag[0]))) fail("invalid value '" + tok + "'");
    if (mag.size() > 1 && mag[0] == '0' && std::isdigit(static_cast<unsigned char>(mag[1]))) {
      fail("leading zeros are not allowed in '" + tok + "'");
    }
    const bool is_float = mag.find_first_of(".eE") != std::string::npos;
    const char* first = body.data() + (body[0] == '+' ? 1 : 0);
    const char* last = body.data() + body.size();
    if (!is_float) {
      std::int64_t v = 0;
      auto res = std::from_chars(first, last, v);
      if (res.ec != std::errc() || res.ptr != last) fail("invalid integer '" + tok + "'");
      return v;
    }
    const auto dot = mag.find('.');
    if (dot != std::string::npos &&
        (dot + 1 >= mag.size() || !std::isdigit(static_cast<unsigned char>(mag[dot + 1])))) {
      fail("a decimal point must be followed by a digit in '" + tok + "'");
    }
    double v = 0.0;
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) fail("invalid float '" + tok + "'");
    return v;
  }
};

}  // namespace

json parse_toml(std::string_view text) { return Parser(text).parse(); }

}  // namespace annealsim
