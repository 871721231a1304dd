#include "toml_lite.hpp"

#include "mma/errors.hpp"

#include <cctype>
#include <charconv>
#include <string>

namespace mma::detail {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  nlohmann::json parse() {
    nlohmann::json root = nlohmann::json::object();
    nlohmann::json* table = &root;
    for (;;) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        table = header(root);
      } else {
        key_value(*table);
      }
      end_of_line();
    }
    return root;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;

  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[pos_]; }

  char get() {
    const char c = s_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("TOML line " + std::to_string(line_) + ": " + what);
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
    for (;;) {
      skip_spaces();
      skip_comment();
      if (peek() == '\r') ++pos_;
      if (peek() == '\n') {
        get();
        continue;
      }
      return;
    }
  }

  /// Whitespace, comments and newlines inside arrays and inline tables.
  void skip_all() {
    for (;;) {
      skip_spaces();
      skip_comment();
      if (peek() == '\r' || peek() == '\n') {
        get();
        continue;
      }
      return;
    }
  }

  void end_of_line() {
    skip_spaces();
    skip_comment();
    if (peek() == '\r') ++pos_;
    if (eof()) return;
    if (peek() != '\n') fail("unexpected text after value");
    get();
  }

  std::string key() {
    skip_spaces();
    if (peek() == '"') return basic_string();
    std::string k;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) k += get();
    if (k.empty()) fail("expected a key");
    skip_spaces();
    if (peek() == '.') fail("dotted keys are not supported");
    return k;
  }

  nlohmann::json* header(nlohmann::json& root) {
    get();
    const bool array = peek() == '[';
    if (array) get();
    const std::string name = key();
    skip_spaces();
    if (get() != ']' || (array && get() != ']')) fail("malformed table header");
    if (array) {
      auto& arr = root[name];
      if (arr.is_null()) arr = nlohmann::json::array();
      if (!arr.is_array()) fail("'" + name + "' is not an array of tables");
      arr.push_back(nlohmann::json::object());
      return &arr.back();
    }
    if (root.contains(name)) fail("table '" + name + "' defined twice");
    root[name] = nlohmann::json::object();
    return &root[name];
  }

  void key_value(nlohmann::json& table) {
    const std::string k = key();
    skip_spaces();
    if (eof() || get() != '=') fail("expected '=' after key '" + k + "'");
    skip_spaces();
    if (table.contains(k)) fail("duplicate key '" + k + "'");
    table[k] = value();
  }

  nlohmann::json value() {
    const char c = peek();
    if (c == '"') return basic_string();
    if (c == '\'') return literal_string();
    if (c == '[') return array();
    if (c == '{') return inline_table();
    if (s_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return true;
    }
    if (s_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return false;
    }
    return number();
  }

  std::string basic_string() {
    get();
    std::string out;
    for (;;) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = get();
      if (c == '"') return out;
      if (c == '\\') {
        if (eof()) fail("unterminated escape");
        c = get();
        switch (c) {
          case 'n':
            out += '\n';
            break;
          case 't':
            out += '\t';
            break;
          case '"':
          case '\\':
            out += c;
            break;
          default:
            fail(std::string("unsupported escape \\") + c);
        }
      } else {
        out += c;
      }
    }
  }

  std::string literal_string() {
    get();
    std::string out;
    for (;;) {
      if (eof() || peek() == '\n') fail("unterminated string");
      const char c = get();
      if (c == '\'') return out;
      out += c;
    }
  }

  nlohmann::json array() {
    get();
    nlohmann::json arr = nlohmann::json::array();
    for (;;) {
      skip_all();
      if (peek() == ']') {
        get();
        return arr;
      }
      arr.push_back(value());
      skip_all();
      if (peek() == ',') {
        get();
      } else if (peek() != ']') {
        fail("expected ',' or ']' in array");
      }
    }
  }

  nlohmann::json inline_table() {
    get();
    nlohmann::json t = nlohmann::json::object();
    skip_spaces();
    if (peek() == '}') {
      get();
      return t;
    }
    for (;;) {
      key_value(t);
      skip_spaces();
      const char c = eof() ? '\0' : get();
      if (c == '}') return t;
      if (c != ',') fail("expected ',' or '}' in inline table");
    }
  }

  nlohmann::json number() {
    std::string tok;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' || peek() == '-' ||
                      peek() == '.' || peek() == '_')) {
      const char c = get();
      if (c != '_') tok += c;
    }
    if (tok.empty()) fail("expected a value");
    const bool is_float = tok.find_first_of(".eE") != std::string::npos || tok == "inf" || tok == "nan";
    const char* first = tok.data() + (tok.front() == '+' ? 1 : 0);
    const char* last = tok.data() + tok.size();
    if (is_float) {
      double d = 0.0;
      const auto r = std::from_chars(first, last, d);
      if (r.ec != std::errc{} || r.ptr != last) fail("invalid number '" + tok + "'");
      return d;
    }
    if (tok.front() == '-') {
      std::int64_t v = 0;
      const auto r = std::from_chars(first, last, v);
      if (r.ec != std::errc{} || r.ptr != last) fail("invalid integer '" + tok + "'");
      return v;
    }
    std::uint64_t v = 0;
    const auto r = std::from_chars(first, last, v);
    if (r.ec != std::errc{} || r.ptr != last) fail("invalid integer '" + tok + "'");
    return v;
  }
};

}  // namespace

nlohmann::json parse_toml_subset(std::string_view text) { return Parser(text).parse(); }

}  // namespace mma::detail
