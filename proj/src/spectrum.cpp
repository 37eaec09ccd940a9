#include "superlase/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "superlase/errors.hpp"
#include "superlase/kernels/kernels.hpp"
#include "superlase/numerics/bessel.hpp"

namespace superlase {

namespace {

constexpr double kLogMax = 709.0;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void validate(double s, double d)
{
    if (!(d > 0.0) || !std::isfinite(d)) {
        throw InvalidArgument("pulsed spectrum needs d > 0 (c < 1)");
    }
    if (!(s >= d) || !std::isfinite(s)) {
        throw InvalidArgument("spectrum needs s >= d");
    }
}

/// Neumaier-compensated accumulator.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x)
    {
        const double t = sum + x;
        carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

struct Evaluated {
    std::vector<double> re;
    std::vector<double> im;
    double abs_sum = 0.0;
};

Evaluated evaluate(double s, double d, std::span<const double> omega, int n_max, int l_max)
{
    const ResonanceTable table = resonance_table(s, d, n_max, l_max);
    std::vector<double> cr(table.coefficients.size()), ci(table.coefficients.size());
    for (std::size_t k = 0; k < cr.size(); ++k) {
        cr[k] = table.coefficients[k].real();
        ci[k] = table.coefficients[k].imag();
    }
    Evaluated out;
    out.re.resize(omega.size());
    out.im.resize(omega.size());
    out.abs_sum = table.abs_sum;
    kernels::active().resonance_sum(cr.size(), cr.data(), ci.data(), table.centers.data(), d, omega.size(),
                                    omega.data(), out.re.data(), out.im.data());
    return out;
}

} // namespace

ResonanceTable resonance_table(double s, double d, int n_max, int l_max)
{
    validate(s, d);
    if (n_max < 1 || l_max < 1) {
        throw InvalidArgument("spectrum truncations must be >= 1");
    }
    const int reach = n_max + l_max + 1;
    const auto full = numerics::bessel_i_scaled_table(n_max, s);
    const auto half = numerics::bessel_i_scaled_table(reach, 0.5 * s);
    auto e_full = [&](int k) { return full[static_cast<std::size_t>(std::abs(k))]; };
    auto e_half = [&](int k) { return half[static_cast<std::size_t>(std::abs(k))]; };

    const int span = n_max + l_max;
    const std::size_t count = static_cast<std::size_t>(2 * span + 1);
    std::vector<CompensatedSum> re(count), im(count);

    ResonanceTable out;
    for (int n = -n_max; n <= n_max; ++n) {
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        const std::complex<double> outer =
            sign * e_full(n) * std::complex<double>(1.0, n / s) / std::complex<double>(d, n);
        if (outer == 0.0) {
            continue;
        }
        for (int l = -l_max; l <= l_max; ++l) {
            const std::complex<double> left(e_half(n + l + 1), -e_half(n + l));
            const std::complex<double> right(e_half(l + 1), e_half(l));
            const std::complex<double> term = outer * left * right;
            const auto slot = static_cast<std::size_t>(n + l + span);
            re[slot].add(term.real());
            im[slot].add(term.imag());
            out.abs_sum += std::abs(term);
        }
    }
    out.centers.resize(count);
    out.coefficients.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        out.centers[k] = 2.0 * (static_cast<int>(k) - span) + 1.0;
        out.coefficients[k] = {re[k].value(), im[k].value()};
    }
    return out;
}

SpectrumSeries time_averaged_spectrum(double s, double d, std::span<const double> omega_over_Omega, int n_max,
                                      int l_max, bool verify_truncation)
{
    validate(s, d);
    SpectrumSeries out;
    out.s = s;
    out.d = d;
    out.n_max = n_max > 0 ? n_max : numerics::default_truncation(s);
    out.l_max = l_max > 0 ? l_max : numerics::default_truncation(s);
    out.omega_over_Omega.assign(omega_over_Omega.begin(), omega_over_Omega.end());

    const Evaluated base = evaluate(s, d, omega_over_Omega, out.n_max, out.l_max);

    // Worst-case roundoff of the resonance sum: |1/(d + i x)| <= 1/d per term.
    const double roundoff = kEps * base.abs_sum * 2.0 / d;
    double peak = 0.0;
    for (std::size_t j = 0; j < base.re.size(); ++j) {
        if (roundoff > 1e-7 * std::abs(base.re[j])) {
            std::ostringstream msg;
            msg << "resonance sum cancels to relative roundoff " << roundoff / std::abs(base.re[j])
                << " at omega/Omega=" << omega_over_Omega[j];
            throw NumericalError(ErrorKind::PrecisionLoss, msg.str());
        }
        peak = std::max(peak, std::abs(base.re[j]));
        const double ratio = base.re[j] != 0.0 ? std::abs(base.im[j] / base.re[j])
                                               : (base.im[j] == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
        out.max_imag_residual = std::max(out.max_imag_residual, ratio);
    }
    // Reintroduce exp(2s) from the scaled Bessel factors together with 1/16.
    const double log_scale = 2.0 * s - std::log(16.0);
    if (peak > 0.0 && std::log(peak) + log_scale > kLogMax) {
        throw NumericalError(ErrorKind::OverflowGuard, "spectrum magnitude exceeds double range");
    }
    const double scale = std::exp(log_scale);
    out.values.resize(base.re.size());
    for (std::size_t j = 0; j < base.re.size(); ++j) {
        out.values[j] = scale * base.re[j];
    }

    if (verify_truncation) {
        const Evaluated doubled = evaluate(s, d, omega_over_Omega, 2 * out.n_max, 2 * out.l_max);
        const double floor = 64.0 * kEps * doubled.abs_sum * 2.0 / d;
        out.truncation_change = 0.0;
        for (std::size_t j = 0; j < base.re.size(); ++j) {
            const double change = std::abs(doubled.re[j] - base.re[j]);
            if (change > 1e-8 * std::abs(base.re[j]) + floor) {
                std::ostringstream msg;
                msg << "doubling (n_max, l_max) = (" << out.n_max << ", " << out.l_max << ") changed S("
                    << omega_over_Omega[j] << ") by " << change / std::abs(base.re[j]) << " relative";
                throw NumericalError(ErrorKind::TruncationNotConverged, msg.str());
            }
            if (base.re[j] != 0.0) {
                out.truncation_change = std::max(out.truncation_change, change / std::abs(base.re[j]));
            }
        }
    }
    return out;
}

std::vector<double> harmonic_weights(double s, double d, int k_max, int n_max)
{
    if (k_max < 0) {
        throw InvalidArgument("k_max must be non-negative");
    }
    std::vector<double> omega;
    for (int k = 0; k <= k_max; ++k) {
        omega.push_back(2.0 * k + 1.0);
    }
    const SpectrumSeries spec = time_averaged_spectrum(s, d, omega, n_max, n_max, true);
    std::vector<double> out(spec.values.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = spec.values[k] / spec.values[0];
    }
    return out;
}

std::vector<double> local_maxima(const SpectrumSeries& spectrum)
{
    std::vector<double> out;
    const auto& v = spectrum.values;
    for (std::size_t j = 1; j + 1 < v.size(); ++j) {
        if (v[j] > v[j - 1] && v[j] > v[j + 1]) {
            out.push_back(spectrum.omega_over_Omega[j]);
        }
    }
    return out;
}

} // namespace superlase
