#include "superlase/errors.hpp"

namespace superlase {

const char* to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ArgumentOutOfRange: return "ArgumentOutOfRange";
    case ErrorKind::NullSpaceDegenerate: return "NullSpaceDegenerate";
    case ErrorKind::NoNullVector: return "NoNullVector";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NotRelaxed: return "NotRelaxed";
    case ErrorKind::QuadratureNoConvergence: return "QuadratureNoConvergence";
    case ErrorKind::TruncationNotConverged: return "TruncationNotConverged";
    case ErrorKind::OverflowGuard: return "OverflowGuard";
    case ErrorKind::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case ErrorKind::PrecisionLoss: return "PrecisionLoss";
    }
    return "Unknown";
}

} // namespace superlase
