#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace closefn {

enum class ErrorCode {
  InvalidArgument,
  NonFiniteEvaluation,
  DomainMismatch,
  OutOfDomain,
  NonSmoothFunction,
  MissingRegularity,
  WeakeningViolation,
  EpsilonOverflow,
  InvalidWeights,
  UnsupportedCombination,
  NoiseViolation,
  EmptySubset,
  DegenerateRStar,
  ConfigError,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFiniteEvaluation: return "NonFiniteEvaluation";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::NonSmoothFunction: return "NonSmoothFunction";
    case ErrorCode::MissingRegularity: return "MissingRegularity";
    case ErrorCode::WeakeningViolation: return "WeakeningViolation";
    case ErrorCode::EpsilonOverflow: return "EpsilonOverflow";
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::UnsupportedCombination: return "UnsupportedCombination";
    case ErrorCode::NoiseViolation: return "NoiseViolation";
    case ErrorCode::EmptySubset: return "EmptySubset";
    case ErrorCode::DegenerateRStar: return "DegenerateRStar";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace closefn
