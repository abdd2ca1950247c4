#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace specknot {

/// Broad failure categories. The CLI maps these onto process exit codes.
enum class ErrorKind {
  InvalidInput,       ///< precondition violated by the caller
  Budget,             ///< knot budget too small for the requested multiplicities
  Numerical,          ///< a numerical invariant broke (e.g. lost conjugate symmetry)
  Parse,              ///< malformed input file
  DimensionMismatch,  ///< input file shape disagrees with the declared layout
  NonFinite,          ///< NaN or Inf in input data
  Io,                 ///< file could not be opened or written
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorKind::InvalidInput, message);
}

}  // namespace specknot
