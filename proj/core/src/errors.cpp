#include "threebody/errors.hpp"

namespace threebody {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNoPhysicalPreimage: return "NoPhysicalPreimage";
    case ErrorCode::kBinaryCollision: return "BinaryCollision";
    case ErrorCode::kCollisionSingularity: return "CollisionSingularity";
    case ErrorCode::kDegenerateMetric: return "DegenerateMetric";
    case ErrorCode::kDegenerateQuartic: return "DegenerateQuartic";
    case ErrorCode::kDegenerateModulus: return "DegenerateModulus";
    case ErrorCode::kRepresentationMismatch: return "RepresentationMismatch";
    case ErrorCode::kSingularJacobian: return "SingularJacobian";
    case ErrorCode::kStepFailure: return "StepFailure";
    case ErrorCode::kInfeasible: return "Infeasible";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code) {}

void fail(ErrorCode code, const std::string& detail) {
  throw Error(code, detail);
}

}  // namespace threebody
