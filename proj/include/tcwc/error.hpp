#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tcwc {

// Bad arguments or parameters outside a construction's regime. CLI exit code 2.
class parameter_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A builder precondition (explicit replacement of "n large enough") failed.
class regime_error : public parameter_error {
 public:
  using parameter_error::parameter_error;
};

// The swap search of the general-t builder found no usable H row.
class exchange_error : public regime_error {
 public:
  using regime_error::regime_error;
};

// Malformed words or codes: length mismatch, weight mismatch, bad labels. CLI exit code 1.
class code_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Greedy ruler search ran out of candidates.
class ruler_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Refusal of an exhaustive search whose input exceeds its size guard.
class guard_error : public parameter_error {
 public:
  using parameter_error::parameter_error;
};

// Text input that does not follow a file format. CLI exit code 3.
class parse_error : public std::runtime_error {
 public:
  parse_error(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// An identity that holds as a theorem failed; indicates a bug.
class internal_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

#define TCWC_ENSURE(cond, msg)                                                      \
  do {                                                                              \
    if (!(cond)) throw ::tcwc::internal_error(std::string("internal: ") + (msg)); \
  } while (0)

}  // namespace tcwc
