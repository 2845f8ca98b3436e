#pragma once

#include <stdexcept>
#include <string>

namespace pwr {

// Base for every error the core throws. The C API maps subclasses to codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. line/column are 1-based; 0 means "not applicable".
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line = 0, int column = 0, std::string token = {})
      : Error(format(message, line, column, token)),
        line_(line),
        column_(column),
        token_(std::move(token)) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& token() const noexcept { return token_; }

 private:
  static std::string format(const std::string& message, int line, int column,
                            const std::string& token) {
    std::string out;
    if (line > 0) {
      out += "line " + std::to_string(line);
      if (column > 0) out += ", column " + std::to_string(column);
      out += ": ";
    }
    out += message;
    if (!token.empty()) out += " '" + token + "'";
    return out;
  }

  int line_;
  int column_;
  std::string token_;
};

// An operation was called on inputs that violate its precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// No operating point satisfies a frequency requirement.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& message, double best_fmax_mhz)
      : Error(message), best_fmax_mhz_(best_fmax_mhz) {}

  double best_fmax_mhz() const noexcept { return best_fmax_mhz_; }

 private:
  double best_fmax_mhz_;
};

}  // namespace pwr
