#include "sumprod/errors.hpp"

namespace sumprod {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::ZeroDilation: return "ZeroDilation";
    case ErrorCode::ZeroElement: return "ZeroElement";
    case ErrorCode::NonPositiveElement: return "NonPositiveElement";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::InvalidWitness: return "InvalidWitness";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::ExactInequalityViolated: return "ExactInequalityViolated";
    case ErrorCode::NonpositiveDenominator: return "NonpositiveDenominator";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string detail)
    : std::runtime_error(std::string(to_string(code)) + (detail.empty() ? "" : ": " + detail)),
      code_(code),
      detail_(std::move(detail)) {}

}  // namespace sumprod
