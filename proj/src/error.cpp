#include "sievesdp/error.hpp"

namespace sievesdp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyPart: return "EmptyPart";
    case ErrorCode::PartsDontCover: return "PartsDontCover";
    case ErrorCode::KappaOutOfRange: return "KappaOutOfRange";
    case ErrorCode::DuplicatePartitionName: return "DuplicatePartitionName";
    case ErrorCode::UnknownPartition: return "UnknownPartition";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NotAnInterval: return "NotAnInterval";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DuplicateTerm: return "DuplicateTerm";
    case ErrorCode::LimitExceeded: return "LimitExceeded";
    case ErrorCode::MalformedCertificate: return "MalformedCertificate";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::PartsNotSingleton: return "PartsNotSingleton";
    case ErrorCode::InfeasibleSpec: return "InfeasibleSpec";
    case ErrorCode::EmptyD: return "EmptyD";
    case ErrorCode::NotDeltaSpaced: return "NotDeltaSpaced";
    case ErrorCode::InfeasibleDenominator: return "InfeasibleDenominator";
    case ErrorCode::NotOrthogonal: return "NotOrthogonal";
    case ErrorCode::TwoPartDegenerate: return "TwoPartDegenerate";
    case ErrorCode::NotTwoParts: return "NotTwoParts";
    case ErrorCode::SubcertificateInvalid: return "SubcertificateInvalid";
    case ErrorCode::NonInvertible: return "NonInvertible";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::GuardExceeded: return "GuardExceeded";
    case ErrorCode::TooManyPartitions: return "TooManyPartitions";
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ResourceLimit: return "ResourceLimit";
  }
  return "Unknown";
}

}  // namespace sievesdp
