#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sievesdp {

enum class ErrorCode {
  EmptyPart,
  PartsDontCover,
  KappaOutOfRange,
  DuplicatePartitionName,
  UnknownPartition,
  IndexOutOfRange,
  NotAnInterval,
  DimensionMismatch,
  DuplicateTerm,
  LimitExceeded,
  MalformedCertificate,
  MalformedInput,
  PartsNotSingleton,
  InfeasibleSpec,
  EmptyD,
  NotDeltaSpaced,
  InfeasibleDenominator,
  NotOrthogonal,
  TwoPartDegenerate,
  NotTwoParts,
  SubcertificateInvalid,
  NonInvertible,
  Infeasible,
  GuardExceeded,
  TooManyPartitions,
  InvalidWeights,
  InvalidArgument,
  ResourceLimit,
};

std::string_view to_string(ErrorCode code);

class SieveError : public std::runtime_error {
 public:
  SieveError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sievesdp
