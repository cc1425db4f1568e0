#include "dspanner/error.hpp"

namespace dspanner {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kNegativeLength: return "NegativeLength";
    case ErrorCode::kSelfLoop: return "SelfLoop";
    case ErrorCode::kDuplicateEdge: return "DuplicateEdge";
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kBadSpec: return "BadSpec";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNotUnitLength: return "NotUnitLength";
    case ErrorCode::kPathExplosion: return "PathExplosion";
    case ErrorCode::kIncompleteEnumeration: return "IncompleteEnumeration";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kExplosionCap: return "ExplosionCap";
    case ErrorCode::kNotReachable: return "NotReachable";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kContractViolation: return "ContractViolation";
  }
  return "Unknown";
}

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIndexOutOfRange:
    case ErrorCode::kNegativeLength:
    case ErrorCode::kSelfLoop:
    case ErrorCode::kDuplicateEdge:
    case ErrorCode::kSyntaxError:
    case ErrorCode::kBadSpec:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kNotUnitLength:
      return 2;
    case ErrorCode::kPathExplosion:
    case ErrorCode::kIncompleteEnumeration:
    case ErrorCode::kTooLarge:
    case ErrorCode::kExplosionCap:
      return 3;
    case ErrorCode::kNotReachable:
    case ErrorCode::kNumericalFailure:
    case ErrorCode::kContractViolation:
      return 5;
  }
  return 5;
}

}  // namespace dspanner
