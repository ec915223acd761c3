#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace threebody {

enum class ErrorCode {
  kInvalidArgument,
  kNoPhysicalPreimage,
  kBinaryCollision,
  kCollisionSingularity,
  kDegenerateMetric,
  kDegenerateQuartic,
  kDegenerateModulus,
  kRepresentationMismatch,
  kSingularJacobian,
  kStepFailure,
  kInfeasible,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (the scenario runner in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& detail);

}  // namespace threebody
