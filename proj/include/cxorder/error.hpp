#pragma once

#include <stdexcept>
#include <string>

namespace cxorder {

enum class ErrorKind {
  DimensionMismatch,
  NegativeWeight,
  NotNormalized,
  Empty,
  NonFinite,
  SolverFailure,
  NumericalInconsistency,
  InvalidCertificate,
  InvalidWitness,
  InvalidArgument,
  Parse,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library carries one of the kinds above so the
// CLI can map it onto an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NegativeWeight: return "NegativeWeight";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::Empty: return "Empty";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::NumericalInconsistency: return "NumericalInconsistency";
    case ErrorKind::InvalidCertificate: return "InvalidCertificate";
    case ErrorKind::InvalidWitness: return "InvalidWitness";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace cxorder
