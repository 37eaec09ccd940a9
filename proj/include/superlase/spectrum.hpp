#pragma once

#include <complex>
#include <span>
#include <vector>

namespace superlase {

/// Time-averaged a-mode spectrum on a grid of omega / Omega. Values carry the
/// 1/16 prefactor; multiply by Gamma_a Gamma_b / Omega^3 for physical units.
struct SpectrumSeries {
    std::vector<double> omega_over_Omega;
    std::vector<double> values;
    int n_max = 0;
    int l_max = 0;
    double max_imag_residual = 0.0;  ///< max_j |Im S_j| / |Re S_j|
    double truncation_change = -1.0; ///< max relative change on doubling; -1 if not checked
    double s = 0.0;
    double d = 0.0;
};

/// Resonance weights C_K of the double Bessel sum, grouped by K = 2(n+l)+1,
/// in units of exp(-2s). centers[k] holds K, coefficients[k] holds C_K.
struct ResonanceTable {
    std::vector<double> centers;
    std::vector<std::complex<double>> coefficients;
    double abs_sum = 0.0; ///< sum over (n, l) of |term|
};

ResonanceTable resonance_table(double s, double d, int n_max, int l_max);

/// Truncations <= 0 select the default order. With verify_truncation the sum
/// is repeated at doubled orders and TruncationNotConverged is raised when
/// any grid value moves by more than 1e-8 relative.
SpectrumSeries time_averaged_spectrum(double s, double d, std::span<const double> omega_over_Omega,
                                      int n_max = 0, int l_max = 0, bool verify_truncation = true);

/// S((2k+1) Omega) / S(Omega) for k = 0 .. k_max.
std::vector<double> harmonic_weights(double s, double d, int k_max, int n_max = 0);

/// Interior strict local maxima of the sampled spectrum.
std::vector<double> local_maxima(const SpectrumSeries& spectrum);

} // namespace superlase
