#include "superlase/semiclassics.hpp"

#include <cmath>

#include "superlase/errors.hpp"

namespace superlase {

const char* to_string(Regime regime) noexcept
{
    switch (regime) {
    case Regime::StableStationary: return "StableStationary";
    case Regime::Pulsed: return "Pulsed";
    case Regime::Boundary: return "Boundary";
    }
    return "?";
}

SemiclassicalSteady semiclassical_steady(int N, double c, double p)
{
    if (N < 1) {
        throw InvalidArgument("atom number N must be >= 1");
    }
    if (!(c > 0.0)) {
        throw InvalidArgument("coupling ratio c must be positive");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidArgument("semiclassical solution needs 0 <= p <= 1");
    }
    SemiclassicalSteady out;
    out.S00 = N * c * (1.0 - p) / (1.0 + c);
    out.S11 = N * p;
    out.S22 = N * (1.0 - p) / (1.0 + c);
    out.alpha = c * std::sqrt(p * (1.0 - p)) / std::sqrt(1.0 + c);
    return out;
}

Regime classify_regime(double c, double p)
{
    if (!(c > 0.0)) {
        throw InvalidArgument("coupling ratio c must be positive");
    }
    if (c < 1.0) {
        return Regime::Pulsed;
    }
    if (c > 1.0 && p >= 0.0 && p <= 1.0) {
        return Regime::StableStationary;
    }
    return Regime::Boundary;
}

} // namespace superlase
