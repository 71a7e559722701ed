#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace oim {

/// Malformed or out-of-contract input (bad file, bad dimensions, bad flag values).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A graph file that could not be parsed; carries the 1-based line number.
class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& detail, const std::string& source = {})
      : InputError((source.empty() ? "line " : source + ":") + std::to_string(line) + ": " +
                   detail),
        line_(line),
        detail_(detail) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

/// The exhaustive sweep was asked to run on a graph above the node cap.
class CapExceededError : public InputError {
 public:
  using InputError::InputError;
};

/// Non-finite values, eigensolver breakdown and similar numerical failures.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace oim
