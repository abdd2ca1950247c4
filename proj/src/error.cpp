#include "specknot/error.hpp"

namespace specknot {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid_input";
    case ErrorKind::Budget: return "budget";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::DimensionMismatch: return "dimension_mismatch";
    case ErrorKind::NonFinite: return "non_finite";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace specknot
