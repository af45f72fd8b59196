#pragma once

#include <stdexcept>
#include <string>

namespace acbc {

enum class ErrorKind {
  InvalidGeometry,
  GridTooCoarse,
  AssumptionAViolated,
  LengthMismatch,
  NoGamma0,
  UnsupportedOrder,
  IncompatibleData,
  SingularSystem,
  ConstraintViolated,
  DegreeMismatch,
  QuadratureOrderMismatch,
  InadmissibleTestFunction,
  LinearSolveFailure,
  UnstableBlowup,
  ConfigParseError,
  ValidationError,
};

const char* to_string(ErrorKind k);

// Carries a machine-readable kind plus the offending field (may be empty).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string field, const std::string& what);

  ErrorKind kind() const { return kind_; }
  const std::string& field() const { return field_; }

 private:
  ErrorKind kind_;
  std::string field_;
};

}  // namespace acbc
