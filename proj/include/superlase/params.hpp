#pragma once

#include <optional>

namespace superlase {

/// Physical rates of the three-level laser. All rates share one time unit.
struct PhysicalParams {
    int N = 1;
    double Omega = 0.0;   ///< pump Rabi frequency
    double g12 = 0.0;     ///< coupling on the 2 -> 1 transition (mode a)
    double g01 = 0.0;     ///< coupling on the 1 -> 0 transition (mode b)
    double kappa_a = 0.0;
    double kappa_b = 0.0;
};

/**
 * Dimensionless parameter set consumed by every solver.
 *
 * Fields that depend on the physical rates (gamma_a, gamma_b, Gamma_a,
 * Gamma_b) are empty when the set was built from (N, c, p) directly.
 * The pulse parameters s and d are empty for p = 0.
 */
struct DerivedParams {
    int N = 1;
    double c = 1.0;
    double p = 0.0;
    double epsilon = 0.0; ///< d/s = (1-c)/(1+c), defined for every p

    std::optional<double> s;
    std::optional<double> d;

    std::optional<double> gamma_a;
    std::optional<double> gamma_b;
    std::optional<double> Gamma_a;
    std::optional<double> Gamma_b;

    bool has_pulse_parameters() const noexcept { return s.has_value() && d.has_value(); }
    bool has_physical_rates() const noexcept { return gamma_b.has_value(); }
};

DerivedParams derive(const PhysicalParams& params);

DerivedParams stationary_inputs(int N, double c, double p);

/// s = (1+c)/(2p sqrt c); requires p > 0.
double pulse_s(double c, double p);
/// d = (1-c)/(2p sqrt c); requires p > 0.
double pulse_d(double c, double p);

} // namespace superlase
