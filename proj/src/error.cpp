#include "acousticbc/error.hpp"

namespace acbc {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidGeometry: return "InvalidGeometry";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::AssumptionAViolated: return "AssumptionAViolated";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NoGamma0: return "NoGamma0";
    case ErrorKind::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorKind::IncompatibleData: return "IncompatibleData";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::ConstraintViolated: return "ConstraintViolated";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::QuadratureOrderMismatch: return "QuadratureOrderMismatch";
    case ErrorKind::InadmissibleTestFunction: return "InadmissibleTestFunction";
    case ErrorKind::LinearSolveFailure: return "LinearSolveFailure";
    case ErrorKind::UnstableBlowup: return "UnstableBlowup";
    case ErrorKind::ConfigParseError: return "ConfigParseError";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, std::string field, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + (field.empty() ? "" : "(" + field + ")") +
                         ": " + what),
      kind_(kind),
      field_(std::move(field)) {}

}  // namespace acbc
