#include "entlab/error.hpp"

namespace entlab {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidSpec: return "InvalidSpec";
        case ErrorKind::InvalidDensity: return "InvalidDensity";
        case ErrorKind::TailTruncation: return "TailTruncation";
        case ErrorKind::DegenerateSupport: return "DegenerateSupport";
        case ErrorKind::SuspectedInfinite: return "SuspectedInfinite";
        case ErrorKind::NonCenteredInput: return "NonCenteredInput";
        case ErrorKind::SolverFailure: return "SolverFailure";
        case ErrorKind::IllConditioned: return "IllConditioned";
        case ErrorKind::PreconditionViolation: return "PreconditionViolation";
        case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
        case ErrorKind::ConditionViolation: return "ConditionViolation";
        case ErrorKind::IoFailure: return "IoFailure";
    }
    return "Unknown";
}

LabError::LabError(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw LabError(kind, message); }

}  // namespace entlab
