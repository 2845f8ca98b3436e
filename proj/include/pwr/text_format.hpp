#pragma once

// Shared line tokenizer for the key=value file formats (netlist, intent,
// activity, characterization, pim script, config).

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pwr::text {

struct Token {
  std::string text;
  int column = 0;  // 1-based
};

struct Line {
  int number = 0;  // 1-based
  std::vector<Token> tokens;
};

// Splits text into non-empty logical lines. '#' starts a comment that runs to
// end of line. Tokens are separated by spaces, tabs or carriage returns.
std::vector<Line> tokenize(std::string_view text);

double parse_double(const Token& tok, const Line& line);
std::int64_t parse_int(const Token& tok, const Line& line);
bool parse_flag(const Token& tok, const Line& line);

// The key=value attributes on a line, starting at a given token index.
// Duplicate keys are a parse error. Any key not consumed by a getter is
// reported by finish() as unknown.
class Attributes {
 public:
  Attributes(const Line& line, std::size_t first);

  const Token* find(std::string_view key);
  const Token& require(std::string_view key);

  double number(std::string_view key);
  std::optional<double> optional_number(std::string_view key);
  std::int64_t integer(std::string_view key);
  bool flag(std::string_view key);
  std::optional<bool> optional_flag(std::string_view key);
  std::string string(std::string_view key);

  void finish() const;

 private:
  struct Entry {
    std::string key;
    Token value;
    bool used = false;
  };
  const Line& line_;
  std::vector<Entry> entries_;
};

// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

// Fixed number of significant digits, for human-readable output.
std::string format_significant(double value, int digits);

}  // namespace pwr::text
