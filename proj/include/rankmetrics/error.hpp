#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rankmetrics {

enum class ErrorCode {
  // Input errors: malformed files, bad flags, unreadable paths.
  ParseError,
  ConfigError,
  InvalidArgument,
  // Validation errors: well-formed input that violates a data contract.
  MissingCell,
  DuplicateKey,
  UnknownMetric,
  NonFiniteScore,
  EmptyAfterDrop,
  MixedDatasets,
  DegenerateSystems,
  LengthMismatch,
  InstanceTooLarge,
  EmptySet,
  NoFeatures,
  TargetNotHuman,
  TooFewRows,
  NoOtherHumans,
  MissingReleaseDate,
  // Numerical failures.
  DegenerateMatrix,
  NumericalFailure,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rankmetrics
