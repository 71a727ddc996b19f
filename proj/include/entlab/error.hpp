#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace entlab {

enum class ErrorKind {
    InvalidSpec,
    InvalidDensity,
    TailTruncation,
    DegenerateSupport,
    SuspectedInfinite,
    NonCenteredInput,
    SolverFailure,
    IllConditioned,
    PreconditionViolation,
    DegenerateDenominator,
    ConditionViolation,
    IoFailure,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so
/// that front ends can map it onto an exit status.
class LabError : public std::runtime_error {
public:
    LabError(ErrorKind kind, const std::string& message);

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace entlab
