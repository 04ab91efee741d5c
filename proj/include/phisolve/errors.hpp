#pragma once

#include <stdexcept>
#include <string>

namespace phisolve {

enum class ErrorCode {
  InvalidArgument,
  NonFiniteValue,
  QuadratureFailure,
  ExponentDeclarationInvalid,
  InvalidMeshSpec,
  BracketFailure,
  NewtonDivergence,
  PreconditionUnmet,
  InvalidParams,
  KSelectionFailure,
  LambdaSearchFailure,
  HypothesisViolation,
  DegenerateThreshold,
  CertificationFailure,
  OrderingViolation,
  SandwichViolation,
  MonotonicityViolation,
  MaxStepsExceeded,
  ConfigError,
  IoError,
};

const char* error_code_name(ErrorCode code);

/// Library-wide exception type; carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace phisolve
