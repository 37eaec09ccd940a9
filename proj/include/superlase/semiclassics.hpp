#pragma once

namespace superlase {

/// Large-N stationary solution. alpha is the field amplitude in units of
/// N gamma_b / g12.
struct SemiclassicalSteady {
    double S00 = 0.0;
    double S11 = 0.0;
    double S22 = 0.0;
    double alpha = 0.0;
};

enum class Regime { StableStationary, Pulsed, Boundary };

const char* to_string(Regime regime) noexcept;

SemiclassicalSteady semiclassical_steady(int N, double c, double p);

Regime classify_regime(double c, double p);

} // namespace superlase
