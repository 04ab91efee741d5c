#include "phisolve/errors.hpp"

namespace phisolve {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::ExponentDeclarationInvalid:
      return "ExponentDeclarationInvalid";
    case ErrorCode::InvalidMeshSpec: return "InvalidMeshSpec";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::NewtonDivergence: return "NewtonDivergence";
    case ErrorCode::PreconditionUnmet: return "PreconditionUnmet";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::KSelectionFailure: return "KSelectionFailure";
    case ErrorCode::LambdaSearchFailure: return "LambdaSearchFailure";
    case ErrorCode::HypothesisViolation: return "HypothesisViolation";
    case ErrorCode::DegenerateThreshold: return "DegenerateThreshold";
    case ErrorCode::CertificationFailure: return "CertificationFailure";
    case ErrorCode::OrderingViolation: return "OrderingViolation";
    case ErrorCode::SandwichViolation: return "SandwichViolation";
    case ErrorCode::MonotonicityViolation: return "MonotonicityViolation";
    case ErrorCode::MaxStepsExceeded: return "MaxStepsExceeded";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace phisolve
