#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rlstream {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// A complex concept in the head of a concept inclusion.
class RLViolation : public ParseError {
 public:
  using ParseError::ParseError;
};

class OutOfOrder : public ParseError {
 public:
  using ParseError::ParseError;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StaleTimestamp : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnexpectedInconsistency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rlstream
