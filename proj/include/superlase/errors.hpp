#pragma once

#include <stdexcept>
#include <string>

namespace superlase {

enum class ErrorKind {
    InvalidArgument,
    ArgumentOutOfRange,
    NullSpaceDegenerate,
    NoNullVector,
    NoConvergence,
    NotRelaxed,
    QuadratureNoConvergence,
    TruncationNotConverged,
    OverflowGuard,
    EpsilonOutOfRange,
    PrecisionLoss,
};

const char* to_string(ErrorKind kind) noexcept;

/// Raised on precondition violations (bad parameters, invalid indices).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
    ErrorKind kind() const noexcept { return ErrorKind::InvalidArgument; }
};

/// Raised when a numerical procedure cannot deliver its post-condition.
class NumericalError : public std::runtime_error {
public:
    NumericalError(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace superlase
