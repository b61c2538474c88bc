// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace skelpipe {

struct ShapeMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct OutOfOrderFrame : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t line)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ")"),
        line(line) {}
  std::size_t line;
};

struct NonMonotoneTimestamp : std::runtime_error {
  NonMonotoneTimestamp(const std::string& msg, std::size_t line)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ")"),
        line(line) {}
  std::size_t line;
};

struct NoOverlap : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TooShort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Degenerate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidSpec : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace skelpipe
