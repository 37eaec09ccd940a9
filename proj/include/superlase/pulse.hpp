#pragma once

#include <span>
#include <vector>

namespace superlase {

enum class PulseMethod { Quadrature, BesselSeries };

const char* to_string(PulseMethod method) noexcept;

/// Dimensionless photon number Int(tau) of the a-mode sampled over one period.
/// Multiply by Gamma_a Gamma_b / (kappa_a Omega) for the physical value.
struct PulseProfile {
    std::vector<double> tau;
    std::vector<double> values;
    PulseMethod method = PulseMethod::BesselSeries;
    int truncation = 0;         ///< series order n_max (series only)
    int transient_periods = 0;  ///< quadrature only
    double s = 0.0;
    double d = 0.0;
};

/// Large-s Gaussian estimate of the periodic pulse.
struct GaussianPulse {
    double tau_max = 0.0;
    double tau_min = 0.0;
    double width = 0.0;           ///< sigma = sqrt(p)
    double log_peak_height = 0.0;
    double peak_height = 0.0;     ///< may be +inf when the logarithm exceeds double range
    double epsilon = 0.0;

    double value(double tau) const;
};

/// Exponent u of the z1^dagger propagator in tau = 2 Omega t units:
/// u = -(d/2) tau - (s/2) sin tau, so Int(tau) carries exp(2u).
double exponent_u(double tau, double s, double d);

/// Smallest number of transient periods with exp(-2 pi d K) < 1e-14.
int default_transient_periods(double d);

/**
 * Int(tau + 2 pi K) from the defining integral by adaptive quadrature.
 *
 * The range [0, tau + 2 pi K] is folded onto one period, which turns the K
 * whole periods into a geometric factor, and every exponential is evaluated
 * relative to its largest value on the range.
 */
double int_tau_quadrature(double s, double d, double tau, int transient_periods, double rel_tol = 1e-9);

struct SeriesTerms {
    double value = 0.0;
    double imag_residual = 0.0; ///< |Im| / |Re| of the paired sum
    double abs_sum = 0.0;       ///< sum of |terms|, in the same scaling as value
};

/// Asymptotic periodic Int(tau) from the modified Bessel expansion with
/// |n| <= n_max, without the truncation check.
SeriesTerms int_tau_series_terms(double s, double d, double tau, int n_max);

/// As above, verified by doubling n_max; n_max <= 0 selects the default order.
double int_tau_series(double s, double d, double tau, int n_max = 0);

/// Profile over the given phases. The series path precomputes the Bessel
/// coefficients once and checks truncation on the whole grid.
PulseProfile pulse_profile(double s, double d, std::span<const double> tau, PulseMethod method, int n_max = 0);

/// n uniformly spaced phases on [0, 2 pi).
std::vector<double> phase_grid(int n);

GaussianPulse gaussian_approx(double s, double d);

struct WidthFit {
    double tau_peak = 0.0;
    double sigma = 0.0;
    double log_peak = 0.0;
};

/// Least-squares parabola through log Int(tau) in the window where the
/// profile stays within exp(-2) of its maximum; sigma = (-2 a)^{-1/2}.
WidthFit fit_pulse_width(double s, double d, int samples = 41);

} // namespace superlase
