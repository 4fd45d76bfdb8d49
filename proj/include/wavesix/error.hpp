#pragma once

#include <stdexcept>
#include <string>

namespace wavesix {

enum class ErrorKind {
  InvalidArgument,
  OutOfRange,
  ModulusMismatch,
  MissingAssignment,
  MalformedDocument,
  NonBinaryEntry,
  DimensionMismatch,
  UnknownField,
  UnsupportedVersion,
  InvalidRepresentation,
  NonUnitCoefficient,
  OverlappingSupport,
  DigestMismatch,
  CorruptedRecord,
  GuardExceeded,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::OutOfRange: return "out of range";
    case ErrorKind::ModulusMismatch: return "modulus mismatch";
    case ErrorKind::MissingAssignment: return "missing variable assignment";
    case ErrorKind::MalformedDocument: return "malformed document";
    case ErrorKind::NonBinaryEntry: return "non-binary entry";
    case ErrorKind::DimensionMismatch: return "dimension mismatch";
    case ErrorKind::UnknownField: return "unknown field";
    case ErrorKind::UnsupportedVersion: return "unsupported version";
    case ErrorKind::InvalidRepresentation: return "invalid representation";
    case ErrorKind::NonUnitCoefficient: return "non-unit f coefficient";
    case ErrorKind::OverlappingSupport: return "overlapping support";
    case ErrorKind::DigestMismatch: return "digest mismatch";
    case ErrorKind::CorruptedRecord: return "corrupted record/rep mismatch";
    case ErrorKind::GuardExceeded: return "materialization guard exceeded";
  }
  return "unknown error";
}

// All library failures are reported through this type; kind() is stable and
// is what callers (and the CLI exit-code mapping) should branch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace wavesix
