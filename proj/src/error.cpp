#include "pdem/error.hpp"

namespace pdem {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::PoleAtC: return "PoleAtC";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::BranchPowerError: return "BranchPowerError";
    case ErrorKind::SingularMatching: return "SingularMatching";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::ContinuationLost: return "ContinuationLost";
    case ErrorKind::StepLimitExceeded: return "StepLimitExceeded";
    case ErrorKind::StepUnderflow: return "StepUnderflow";
    case ErrorKind::NoSignChange: return "NoSignChange";
    case ErrorKind::UnknownBoundIndex: return "UnknownBoundIndex";
  }
  return "Unknown";
}

}  // namespace pdem
