#include "superlase/numerics/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "superlase/errors.hpp"

namespace superlase::numerics {

namespace {

void check_domain(int n_max, double s)
{
    if (!(s >= 0.0) || !std::isfinite(s)) {
        throw InvalidArgument("Bessel argument must be finite and non-negative");
    }
    if (s > kBesselMaxArgument || std::abs(n_max) > kBesselMaxOrder) {
        throw NumericalError(ErrorKind::ArgumentOutOfRange,
                             "scaled Bessel requested outside validated domain (n=" + std::to_string(n_max)
                                 + ", s=" + std::to_string(s) + ")");
    }
}

} // namespace

int default_truncation(double s)
{
    return static_cast<int>(std::ceil(s + 10.0 * std::sqrt(s) + 20.0));
}

std::vector<double> bessel_i_scaled_table(int n_max, double s)
{
    check_domain(n_max, s);
    if (n_max < 0) {
        throw InvalidArgument("table order must be non-negative");
    }
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
    if (s == 0.0) {
        out[0] = 1.0;
        return out;
    }

    const double top = std::max(static_cast<double>(n_max), std::ceil(s));
    const int start = static_cast<int>(top + std::ceil(10.0 * std::sqrt(top)) + 30.0);

    constexpr double kBig = 1e250;
    constexpr double kShrink = 1e-250;

    // Backward recurrence I_{k-1} = I_{k+1} + (2k/s) I_k from I_{start+1} = 0.
    double next = 0.0;   // I_{k+1}
    double curr = 1.0;   // I_k
    double sum = 0.0;    // sum_{j >= 1} I_j over visited orders
    for (int k = start; k >= 1; --k) {
        if (k <= n_max) {
            out[static_cast<std::size_t>(k)] = curr;
        }
        sum += curr;
        const double prev = next + (2.0 * k / s) * curr;
        next = curr;
        curr = prev;
        if (curr > kBig) {
            curr *= kShrink;
            next *= kShrink;
            sum *= kShrink;
            const int hi = std::min(n_max, start);
            for (int j = k; j <= hi; ++j) {
                out[static_cast<std::size_t>(j)] *= kShrink;
            }
        }
    }
    out[0] = curr;
    const double norm = curr + 2.0 * sum;
    for (double& v : out) {
        v /= norm;
    }
    return out;
}

double bessel_i_scaled(int n, double s)
{
    const int order = std::abs(n);
    check_domain(order, s);
    return bessel_i_scaled_table(order, s)[static_cast<std::size_t>(order)];
}

} // namespace superlase::numerics
