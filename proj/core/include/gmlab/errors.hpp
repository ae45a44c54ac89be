#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gmlab {

enum class ErrorKind {
    // exponent validation
    NonFinite,
    NegativeExponent,
    ZeroR,
    NonPositiveLeft,
    NonStrictRight,
    // analytic objects
    NoConvergence,
    DomainError,
    DegenerateP,
    AssumptionViolated,
    PreconditionViolated,
    // spectrum
    InvalidGeometry,
    TruncationUnsafe,
    // pde solver
    NonPositiveField,
    LinearSolveFailure,
    BlowUp,
    PathFailure,
    InvalidGrid,
    // verifier / io
    NotConverged,
    ParseError,
    InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Exception carrying a machine-readable kind; `what()` holds the human message.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace gmlab
