#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dspanner {

enum class ErrorCode {
  kIndexOutOfRange,
  kNegativeLength,
  kSelfLoop,
  kDuplicateEdge,
  kSyntaxError,
  kBadSpec,
  kInvalidArgument,
  kNotUnitLength,
  kPathExplosion,
  kIncompleteEnumeration,
  kTooLarge,
  kExplosionCap,
  kNotReachable,
  kNumericalFailure,
  kContractViolation,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Process exit status for an error: 2 parse/config, 3 cap exceeded,
/// 5 internal numerical failure.
int exit_status(ErrorCode code);

}  // namespace dspanner
