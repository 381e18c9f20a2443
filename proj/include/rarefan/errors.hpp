#pragma once

#include <stdexcept>
#include <string>

namespace rarefan {

enum class ErrorCode {
  SubsonicState,
  OutOfRange,
  LeftSupersonicLost,
  StepFailure,
  EntropyViolation,
  NoRoot,
  NoConvergence,
  Unreachable,
  PressureOutOfRange,
  TVTooLarge,
  UnclassifiableGeometry,
  AuditFailure,
  ConstantsInvalid,
  GateViolation,
  ParseError,
  IoError,
};

const char* error_name(ErrorCode code);

class SolverError : public std::runtime_error {
 public:
  SolverError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rarefan
