#pragma once

#include <stdexcept>
#include <string>

namespace uniformize {

enum class ErrorCode {
    // input validation
    UnmatchedSide,
    NonOrientable,
    EulerMismatch,
    UnknownVertex,
    SameVertex,
    IncompatibleShear,
    NonTriangleFace,
    OpenMesh,
    ZeroLengthEdge,
    ParseError,
    InvalidInput,
    WrongGenus,
    WrongKind,
    GaussBonnetViolated,
    // combinatorial / geometric preconditions
    DegenerateFlip,
    DegenerateQuad,
    TriangleInequalityViolated,
    OutsideDomainA,
    NotNeutral,
    // solver-side failures
    FlipLimitExceeded,
    IterLimit,
    LineSearchFailure,
    NotRealizable,
    LayoutInconsistent,
    ConvexityViolated,
    InternalInconsistency,
};

const char* error_name(ErrorCode code);

// True for errors that indicate a numerical or solver failure rather than bad input.
bool is_solver_failure(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace uniformize
