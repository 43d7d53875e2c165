#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fairpot {

// Precondition violations on numeric inputs (empty measures, out-of-range
// parameters, mismatched dimensions).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Well-formed input that violates a value constraint (score outside [0,1],
// duplicate ids, unknown config key).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input. Line numbers are 1-based and include the header.
class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace fairpot
