#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace webrank {

/// Invalid input data (bad indices, broken invariants, unusable files).
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& message, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

} // namespace webrank
