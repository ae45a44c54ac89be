#include "gmlab/errors.hpp"

namespace gmlab {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::NegativeExponent: return "NegativeExponent";
        case ErrorKind::ZeroR: return "ZeroR";
        case ErrorKind::NonPositiveLeft: return "NonPositiveLeft";
        case ErrorKind::NonStrictRight: return "NonStrictRight";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::DegenerateP: return "DegenerateP";
        case ErrorKind::AssumptionViolated: return "AssumptionViolated";
        case ErrorKind::PreconditionViolated: return "PreconditionViolated";
        case ErrorKind::InvalidGeometry: return "InvalidGeometry";
        case ErrorKind::TruncationUnsafe: return "TruncationUnsafe";
        case ErrorKind::NonPositiveField: return "NonPositiveField";
        case ErrorKind::LinearSolveFailure: return "LinearSolveFailure";
        case ErrorKind::BlowUp: return "BlowUp";
        case ErrorKind::PathFailure: return "PathFailure";
        case ErrorKind::InvalidGrid: return "InvalidGrid";
        case ErrorKind::NotConverged: return "NotConverged";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace gmlab
