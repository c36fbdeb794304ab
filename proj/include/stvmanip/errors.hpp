#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stvm {

/// Malformed input to a public operation (empty candidate set, bad parameters).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A caller broke a documented precondition (e.g. eliminating a candidate that is already out).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The brute-force oracle refused an instance larger than its budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ParseErrorKind {
  malformed_header,
  malformed_line,
  bad_weight,
  wrong_length,
  unknown_candidate,
  duplicate_candidate,
};

const char* to_string(ParseErrorKind kind);

/// Profile/spec/CSV text that could not be parsed. Carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, std::size_t line, const std::string& detail);

  ParseErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ParseErrorKind kind_;
  std::size_t line_;
};

}  // namespace stvm
