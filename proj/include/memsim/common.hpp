#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace memsim {

/// Simulated time in device clock cycles.
using Tick = std::uint64_t;

using RowIndex = std::uint32_t;

/// Bad user input: config or trace files that fail to parse or validate.
/// `line()` is 0 when the problem is not tied to a specific line.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Violated simulator invariant. Reaching one of these is a bug, not a
/// user error.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace memsim
