#include "trilaman/error.hpp"

namespace trilaman {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonAdjacentParents: return "NonAdjacentParents";
    case ErrorCode::DuplicateVertex: return "DuplicateVertex";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::NotTLG: return "NotTLG";
    case ErrorCode::NonPositiveDistance: return "NonPositiveDistance";
    case ErrorCode::NotClassF: return "NotClassF";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::InvalidSupport: return "InvalidSupport";
    case ErrorCode::EdgeCollision: return "EdgeCollision";
    case ErrorCode::Stalled: return "Stalled";
    case ErrorCode::CollisionApproach: return "CollisionApproach";
    case ErrorCode::SingularGaugeJacobian: return "SingularGaugeJacobian";
    case ErrorCode::DegenerateBase: return "DegenerateBase";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotEquilibrium: return "NotEquilibrium";
    case ErrorCode::NotCollinear: return "NotCollinear";
    case ErrorCode::NotRepairable: return "NotRepairable";
    case ErrorCode::SpecError: return "SpecError";
  }
  return "Unknown";
}

}  // namespace trilaman
