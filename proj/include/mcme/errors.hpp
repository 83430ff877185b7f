#pragma once
#include <stdexcept>
#include <string>

namespace mcme {

// Error taxonomy used across the library. Kind drives CLI exit codes and
// lets callers distinguish recoverable conditions (Capacity) from bad input.
enum class ErrorKind {
  Format,      // malformed input file
  Argument,    // caller contract violation
  Capacity,    // contingency table above the cell cap
  Structure,   // graph-level violation (cycles)
  Validation,  // semantic check failed (CPT row sums, coverage)
  Reference,   // undeclared name referenced
  Io,          // file system failure
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Format: return "format";
    case ErrorKind::Argument: return "argument";
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::Structure: return "structure";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Reference: return "reference";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace mcme
