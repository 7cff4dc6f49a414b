#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aerodet {

// Malformed input file contents (CSV rows, image headers, config lines).
// Precondition violations on library calls throw std::invalid_argument.
class InputFormatError : public std::runtime_error {
 public:
  InputFormatError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what
                                     : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  // 1-based line number, or 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace aerodet
