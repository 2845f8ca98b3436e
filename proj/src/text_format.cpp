#include "pwr/text_format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "pwr/errors.hpp"

namespace pwr::text {

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);

    Line line;
    line.number = number;
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\r')) ++i;
      if (i >= raw.size()) break;
      std::size_t start = i;
      while (i < raw.size() && raw[i] != ' ' && raw[i] != '\t' && raw[i] != '\r') ++i;
      line.tokens.push_back({std::string(raw.substr(start, i - start)), static_cast<int>(start) + 1});
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

double parse_double(const Token& tok, const Line& line) {
  double value = 0.0;
  const char* first = tok.text.data();
  const char* last = first + tok.text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value))
    throw ParseError("expected a number, got", line.number, tok.column, tok.text);
  return value;
}

std::int64_t parse_int(const Token& tok, const Line& line) {
  std::int64_t value = 0;
  const char* first = tok.text.data();
  const char* last = first + tok.text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw ParseError("expected an integer, got", line.number, tok.column, tok.text);
  return value;
}

bool parse_flag(const Token& tok, const Line& line) {
  if (tok.text == "0") return false;
  if (tok.text == "1") return true;
  throw ParseError("expected 0 or 1, got", line.number, tok.column, tok.text);
}

Attributes::Attributes(const Line& line, std::size_t first) : line_(line) {
  for (std::size_t i = first; i < line.tokens.size(); ++i) {
    const Token& tok = line.tokens[i];
    auto eq = tok.text.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ParseError("expected key=value, got", line.number, tok.column, tok.text);
    std::string key = tok.text.substr(0, eq);
    for (const auto& e : entries_)
      if (e.key == key) throw ParseError("duplicate attribute", line.number, tok.column, key);
    Token value{tok.text.substr(eq + 1), tok.column + static_cast<int>(eq) + 1};
    if (value.text.empty())
      throw ParseError("empty value for attribute", line.number, tok.column, key);
    entries_.push_back({std::move(key), std::move(value), false});
  }
}

const Token* Attributes::find(std::string_view key) {
  for (auto& e : entries_) {
    if (e.key == key) {
      e.used = true;
      return &e.value;
    }
  }
  return nullptr;
}

const Token& Attributes::require(std::string_view key) {
  if (const Token* t = find(key)) return *t;
  throw ParseError("missing attribute", line_.number, line_.tokens.front().column, std::string(key));
}

double Attributes::number(std::string_view key) { return parse_double(require(key), line_); }

std::optional<double> Attributes::optional_number(std::string_view key) {
  if (const Token* t = find(key)) return parse_double(*t, line_);
  return std::nullopt;
}

std::int64_t Attributes::integer(std::string_view key) { return parse_int(require(key), line_); }

bool Attributes::flag(std::string_view key) { return parse_flag(require(key), line_); }

std::optional<bool> Attributes::optional_flag(std::string_view key) {
  if (const Token* t = find(key)) return parse_flag(*t, line_);
  return std::nullopt;
}

std::string Attributes::string(std::string_view key) { return require(key).text; }

void Attributes::finish() const {
  for (const auto& e : entries_)
    if (!e.used)
      throw ParseError("unknown attribute", line_.number, e.value.column - static_cast<int>(e.key.size()) - 1,
                       e.key);
}

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

std::string format_significant(double value, int digits) {
  if (value == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

}  // namespace pwr::text
