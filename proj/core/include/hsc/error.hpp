#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hsc {

enum class ErrorKind {
  InvalidDimension,
  InvalidParameter,
  InvalidGrid,
  IncompatibleGrid,
  DegenerateInput,
  NoProjection,
  Precondition,
  DegeneratePath,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Exception carrying a machine-readable kind. The CLI maps every kind except
/// solver non-convergence (which is a report, not an exception) to exit code 2.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidDimension: return "invalid-dimension";
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::InvalidGrid: return "invalid-grid";
    case ErrorKind::IncompatibleGrid: return "incompatible-grid";
    case ErrorKind::DegenerateInput: return "degenerate-input";
    case ErrorKind::NoProjection: return "no-projection";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::DegeneratePath: return "degenerate-path";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace hsc
