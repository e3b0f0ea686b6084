#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sml {

/// Malformed input file. `line()` is 1-based, 0 when the error is not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A feature vector whose L2 norm is zero cannot be normalized.
class ZeroNormError : public std::invalid_argument {
 public:
  explicit ZeroNormError(const std::string& message) : std::invalid_argument(message) {}
};

class DimensionMismatch : public std::invalid_argument {
 public:
  explicit DimensionMismatch(const std::string& message) : std::invalid_argument(message) {}
};

}  // namespace sml
