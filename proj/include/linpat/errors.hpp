#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace linpat {

/// Caller violated a precondition (bad arguments, mismatched domains, malformed input).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A malformed input file. Carries the 1-based line number of the offending line.
class ParseError : public UsageError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : UsageError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A computation would exceed the configured term or table budget.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A randomized search ran out of iterations without finding what it looked for.
class SearchExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace linpat
