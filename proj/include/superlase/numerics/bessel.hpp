#pragma once

#include <vector>

namespace superlase::numerics {

/// Largest argument and order accepted by the scaled Bessel routines.
inline constexpr double kBesselMaxArgument = 1000.0;
inline constexpr int kBesselMaxOrder = 4000;

/// exp(-s) I_n(s) for integer n and s >= 0.
double bessel_i_scaled(int n, double s);

/**
 * exp(-s) I_k(s) for k = 0 .. n_max, by Miller's backward recurrence
 * normalised with I_0 + 2 sum_k I_k = exp(s). Negative orders follow from
 * I_{-k} = I_k. Unscaled values are never formed, so the result is finite
 * for every argument in the validated domain.
 */
std::vector<double> bessel_i_scaled_table(int n_max, double s);

/// Truncation order for Bessel-series sums: ceil(s + 10 sqrt(s) + 20).
int default_truncation(double s);

} // namespace superlase::numerics
