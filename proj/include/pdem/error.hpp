#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pdem {

enum class ErrorKind {
  InvalidParams,
  DomainError,
  PoleAtC,
  NonConvergence,
  BranchPowerError,
  SingularMatching,
  NoConvergence,
  ContinuationLost,
  StepLimitExceeded,
  StepUnderflow,
  NoSignChange,
  UnknownBoundIndex,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// that sweep drivers can record it per grid point instead of aborting.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pdem
