#pragma once

#include <stdexcept>
#include <string>

namespace tame {

// Malformed input text; carries 1-based line/column of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, int line, int column)
      : std::runtime_error(message + " at line " + std::to_string(line) +
                           ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Raised when elimination exceeds the configured atom budget.
class ResourceLimitError : public std::runtime_error {
 public:
  explicit ResourceLimitError(const std::string& message)
      : std::runtime_error(message) {}
};

// Contract violation on an operation's input.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& message)
      : std::invalid_argument(message) {}
};

}  // namespace tame
