#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sumprod {

enum class ErrorCode {
  EmptySet,
  DivisionByZero,
  ZeroDilation,
  ZeroElement,
  NonPositiveElement,
  TooSmall,
  InvalidWitness,
  InvalidParameter,
  PreconditionViolated,
  ExactInequalityViolated,
  NonpositiveDenominator,
  BudgetExceeded,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above plus a
/// human-readable detail (for InvalidWitness the detail is the constraint name).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace sumprod
