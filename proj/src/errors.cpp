#include "uniformize/errors.hpp"

namespace uniformize {

const char* error_name(ErrorCode code)
{
    switch (code) {
    case ErrorCode::UnmatchedSide: return "UnmatchedSide";
    case ErrorCode::NonOrientable: return "NonOrientable";
    case ErrorCode::EulerMismatch: return "EulerMismatch";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::SameVertex: return "SameVertex";
    case ErrorCode::IncompatibleShear: return "IncompatibleShear";
    case ErrorCode::NonTriangleFace: return "NonTriangleFace";
    case ErrorCode::OpenMesh: return "OpenMesh";
    case ErrorCode::ZeroLengthEdge: return "ZeroLengthEdge";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::WrongGenus: return "WrongGenus";
    case ErrorCode::WrongKind: return "WrongKind";
    case ErrorCode::GaussBonnetViolated: return "GaussBonnetViolated";
    case ErrorCode::DegenerateFlip: return "DegenerateFlip";
    case ErrorCode::DegenerateQuad: return "DegenerateQuad";
    case ErrorCode::TriangleInequalityViolated: return "TriangleInequalityViolated";
    case ErrorCode::OutsideDomainA: return "OutsideDomainA";
    case ErrorCode::NotNeutral: return "NotNeutral";
    case ErrorCode::FlipLimitExceeded: return "FlipLimitExceeded";
    case ErrorCode::IterLimit: return "IterLimit";
    case ErrorCode::LineSearchFailure: return "LineSearchFailure";
    case ErrorCode::NotRealizable: return "NotRealizable";
    case ErrorCode::LayoutInconsistent: return "LayoutInconsistent";
    case ErrorCode::ConvexityViolated: return "ConvexityViolated";
    case ErrorCode::InternalInconsistency: return "InternalInconsistency";
    }
    return "Unknown";
}

bool is_solver_failure(ErrorCode code)
{
    switch (code) {
    case ErrorCode::FlipLimitExceeded:
    case ErrorCode::IterLimit:
    case ErrorCode::LineSearchFailure:
    case ErrorCode::NotRealizable:
    case ErrorCode::LayoutInconsistent:
    case ErrorCode::ConvexityViolated:
    case ErrorCode::InternalInconsistency:
        return true;
    default:
        return false;
    }
}

} // namespace uniformize
