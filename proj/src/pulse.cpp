#include "superlase/pulse.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "superlase/errors.hpp"
#include "superlase/kernels/kernels.hpp"
#include "superlase/numerics/bessel.hpp"
#include "superlase/numerics/quadrature.hpp"

namespace superlase {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kLogMax = 709.0;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kMaxRoundoff = 1e-7;

void check_cancellation(double value, double roundoff, double tau)
{
    if (roundoff > kMaxRoundoff * std::abs(value)) {
        std::ostringstream msg;
        msg << "Bessel series cancels to relative roundoff " << roundoff / std::abs(value) << " at tau=" << tau
            << "; use the quadrature method";
        throw NumericalError(ErrorKind::PrecisionLoss, msg.str());
    }
}

void validate_pulse(double s, double d)
{
    if (!(d > 0.0) || !std::isfinite(d)) {
        throw InvalidArgument("pulsed regime needs d > 0 (c < 1)");
    }
    if (!(s >= d) || !std::isfinite(s)) {
        throw InvalidArgument("pulse parameters need s >= d");
    }
}

double checked_exp(double log_value, const char* what)
{
    if (log_value > kLogMax) {
        std::ostringstream msg;
        msg << what << ": log-magnitude " << log_value << " exceeds double range";
        throw NumericalError(ErrorKind::OverflowGuard, msg.str());
    }
    return std::exp(log_value);
}

/// Real Fourier coefficients of sum_n c_n e^{i n tau} with
/// c_n = (-i)^n e^{-s} I_n(s) (1 + i n/s) / (d + i n), so that
/// Re sum = sum_n a_n cos(n tau) - b_n sin(n tau).
struct FourierCoefficients {
    std::vector<double> a;
    std::vector<double> b;
    double abs_sum = 0.0;
};

std::complex<double> minus_i_pow(int n)
{
    switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
    }
}

std::complex<double> series_coefficient(int n, double bessel, double s, double d)
{
    const std::complex<double> shape(1.0, n / s);
    return minus_i_pow(n) * bessel * shape / std::complex<double>(d, n);
}

FourierCoefficients fourier_coefficients(double s, double d, int n_max)
{
    const auto bessel = numerics::bessel_i_scaled_table(n_max, s);
    FourierCoefficients out;
    out.a.resize(static_cast<std::size_t>(n_max) + 1);
    out.b.resize(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        const auto c = series_coefficient(n, bessel[static_cast<std::size_t>(n)], s, d);
        const double weight = n == 0 ? 1.0 : 2.0;
        out.a[static_cast<std::size_t>(n)] = weight * c.real();
        out.b[static_cast<std::size_t>(n)] = weight * c.imag();
        out.abs_sum += weight * std::abs(c);
    }
    return out;
}

/// log of the prefactor 1/2 sin^2(tau/2) exp(s (1 - sin tau)); -inf where sin(tau/2) = 0.
double log_prefactor(double s, double tau)
{
    const double half = std::sin(0.5 * tau);
    if (half == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    return std::log(0.5 * half * half) + s * (1.0 - std::sin(tau));
}

class SeriesEvaluator {
public:
    SeriesEvaluator(double s, double d, int n_max)
        : s_(s), coeffs_(fourier_coefficients(s, d, n_max)), cos_(coeffs_.a.size()), sin_(coeffs_.a.size())
    {
    }

    /// Re of the scaled Bessel sum at tau.
    double scaled_sum(double tau)
    {
        for (std::size_t n = 0; n < cos_.size(); ++n) {
            const double angle = static_cast<double>(n) * tau;
            cos_[n] = std::cos(angle);
            sin_[n] = std::sin(angle);
        }
        return kernels::dot_diff(coeffs_.a, cos_, coeffs_.b, sin_);
    }

    double value(double tau)
    {
        const double lp = log_prefactor(s_, tau);
        if (std::isinf(lp)) {
            return 0.0;
        }
        const double sum = scaled_sum(tau);
        if (sum == 0.0) {
            return 0.0;
        }
        return std::copysign(checked_exp(lp + std::log(std::abs(sum)), "Int(tau) series"), sum);
    }

    /// Roundoff bound of value(tau) from the cancellation in the sum.
    double roundoff(double tau) const
    {
        const double lp = log_prefactor(s_, tau);
        return std::isinf(lp) ? 0.0 : kEps * coeffs_.abs_sum * std::exp(std::min(lp, kLogMax));
    }

private:
    double s_;
    FourierCoefficients coeffs_;
    std::vector<double> cos_;
    std::vector<double> sin_;
};

int resolve_truncation(double s, int n_max)
{
    return n_max > 0 ? n_max : numerics::default_truncation(s);
}

} // namespace

const char* to_string(PulseMethod method) noexcept
{
    return method == PulseMethod::Quadrature ? "quadrature" : "bessel-series";
}

double exponent_u(double tau, double s, double d)
{
    return -0.5 * d * tau - 0.5 * s * std::sin(tau);
}

int default_transient_periods(double d)
{
    if (!(d > 0.0)) {
        throw InvalidArgument("transients only decay for d > 0");
    }
    return static_cast<int>(std::floor(14.0 * std::log(10.0) / (kTwoPi * d))) + 1;
}

namespace {

double log_int_tau_quadrature(double s, double d, double tau, int transient_periods, double rel_tol)
{
    validate_pulse(s, d);
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw InvalidArgument("phase tau must be finite and non-negative");
    }
    if (transient_periods < 0 || -kTwoPi * d * transient_periods >= std::log(1e-14)) {
        throw InvalidArgument("transient_periods too small: exp(-2 pi d K) must be below 1e-14");
    }
    const double whole = std::floor(tau / kTwoPi);
    const double phase = tau - kTwoPi * whole;
    const double periods = transient_periods + whole;

    const double sin_phase = std::sin(phase);
    const double half = std::sin(0.5 * phase);
    if (half == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    auto exponent = [&](double t) { return d * (t - phase) + s * (std::sin(t) - sin_phase); };

    // Reference exponent: largest sampled value over both integration ranges.
    double shift = exponent(phase);
    constexpr int kProbe = 256;
    for (int k = 0; k <= kProbe; ++k) {
        const double t = kTwoPi * k / kProbe;
        if (t <= phase) {
            shift = std::max(shift, exponent(t));
        }
        shift = std::max(shift, exponent(t) - kTwoPi * d);
    }

    auto current = [&](double t) {
        const double c = std::cos(0.5 * t);
        return c * c * std::exp(exponent(t) - shift);
    };
    auto earlier = [&](double t) {
        const double c = std::cos(0.5 * t);
        return c * c * std::exp(exponent(t) - kTwoPi * d - shift);
    };

    const double q = std::exp(-kTwoPi * d);
    const double geometric = -std::expm1(periods * std::log(q)) / -std::expm1(-kTwoPi * d);
    const double partial = numerics::adaptive_quadrature(current, 0.0, phase, rel_tol);
    const double full = numerics::adaptive_quadrature(earlier, 0.0, kTwoPi, rel_tol);
    const double bracket = partial + geometric * full;
    if (bracket <= 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    return std::log(half * half) + shift + std::log(bracket);
}

} // namespace

double int_tau_quadrature(double s, double d, double tau, int transient_periods, double rel_tol)
{
    const double log_value = log_int_tau_quadrature(s, d, tau, transient_periods, rel_tol);
    return std::isinf(log_value) ? 0.0 : checked_exp(log_value, "Int(tau) quadrature");
}

SeriesTerms int_tau_series_terms(double s, double d, double tau, int n_max)
{
    validate_pulse(s, d);
    if (n_max < 1) {
        throw InvalidArgument("series truncation must be >= 1");
    }
    const auto bessel = numerics::bessel_i_scaled_table(n_max, s);
    std::complex<double> sum = series_coefficient(0, bessel[0], s, d);
    double abs_sum = std::abs(sum);
    for (int n = 1; n <= n_max; ++n) {
        const double e = bessel[static_cast<std::size_t>(n)];
        const auto up = series_coefficient(n, e, s, d) * std::polar(1.0, n * tau);
        const auto down = series_coefficient(-n, e, s, d) * std::polar(1.0, -n * tau);
        sum += up + down;
        abs_sum += std::abs(up) + std::abs(down);
    }
    SeriesTerms out;
    const double lp = log_prefactor(s, tau);
    if (std::isinf(lp)) {
        return out;
    }
    out.imag_residual = sum.real() != 0.0 ? std::abs(sum.imag() / sum.real())
                                          : (sum.imag() == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    const double scale = checked_exp(lp, "Int(tau) series prefactor");
    out.value = scale * sum.real();
    out.abs_sum = scale * abs_sum;
    return out;
}

double int_tau_series(double s, double d, double tau, int n_max)
{
    const int order = resolve_truncation(s, n_max);
    const auto base = int_tau_series_terms(s, d, tau, order);
    check_cancellation(base.value, kEps * base.abs_sum, tau);
    const auto doubled = int_tau_series_terms(s, d, tau, 2 * order);
    const double change = std::abs(doubled.value - base.value);
    if (change > 1e-8 * std::abs(base.value) + 64.0 * kEps * doubled.abs_sum) {
        std::ostringstream msg;
        msg << "doubling n_max=" << order << " changed Int(" << tau << ") by " << change;
        throw NumericalError(ErrorKind::TruncationNotConverged, msg.str());
    }
    return base.value;
}

std::vector<double> phase_grid(int n)
{
    if (n < 1) {
        throw InvalidArgument("phase grid needs at least one point");
    }
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        out[static_cast<std::size_t>(k)] = kTwoPi * k / n;
    }
    return out;
}

PulseProfile pulse_profile(double s, double d, std::span<const double> tau, PulseMethod method, int n_max)
{
    validate_pulse(s, d);
    PulseProfile out;
    out.tau.assign(tau.begin(), tau.end());
    out.values.resize(tau.size());
    out.method = method;
    out.s = s;
    out.d = d;

    if (method == PulseMethod::Quadrature) {
        out.transient_periods = default_transient_periods(d);
        for (std::size_t i = 0; i < tau.size(); ++i) {
            out.values[i] = int_tau_quadrature(s, d, tau[i], out.transient_periods);
        }
        return out;
    }

    out.truncation = resolve_truncation(s, n_max);
    SeriesEvaluator base(s, d, out.truncation);
    SeriesEvaluator doubled(s, d, 2 * out.truncation);
    for (std::size_t i = 0; i < tau.size(); ++i) {
        out.values[i] = base.value(tau[i]);
        check_cancellation(out.values[i], base.roundoff(tau[i]), tau[i]);
        const double change = std::abs(doubled.value(tau[i]) - out.values[i]);
        if (change > 1e-8 * std::abs(out.values[i]) + 64.0 * doubled.roundoff(tau[i])) {
            std::ostringstream msg;
            msg << "doubling n_max=" << out.truncation << " changed Int(" << tau[i] << ") by " << change;
            throw NumericalError(ErrorKind::TruncationNotConverged, msg.str());
        }
    }
    return out;
}

double GaussianPulse::value(double tau) const
{
    const double x = tau - tau_max;
    return std::exp(log_peak_height - x * x / (2.0 * width * width));
}

GaussianPulse gaussian_approx(double s, double d)
{
    if (!(s > 0.0)) {
        throw InvalidArgument("Gaussian pulse estimate needs s > 0");
    }
    const double epsilon = d / s;
    if (!(std::abs(epsilon) < 1.0)) {
        throw NumericalError(ErrorKind::EpsilonOutOfRange, "|d/s| must be below 1");
    }
    const double root = std::sqrt(1.0 - epsilon * epsilon);
    GaussianPulse out;
    out.epsilon = epsilon;
    out.tau_max = std::atan2(-root, -epsilon) + kTwoPi; // third quadrant for epsilon > 0
    if (out.tau_max >= kTwoPi) {
        out.tau_max -= kTwoPi;
    }
    out.tau_min = std::atan2(root, -epsilon);
    const double p = 1.0 / std::sqrt(s * s - d * d);
    out.width = std::sqrt(p);
    out.log_peak_height = std::log(0.25 / (s * s * p * p) * std::sqrt(kTwoPi * p)) + 2.0 / p
        - d * (out.tau_max - out.tau_min);
    out.peak_height = out.log_peak_height > kLogMax ? std::numeric_limits<double>::infinity()
                                                    : std::exp(out.log_peak_height);
    return out;
}

WidthFit fit_pulse_width(double s, double d, int samples)
{
    validate_pulse(s, d);
    if (samples < 5) {
        throw InvalidArgument("width fit needs at least 5 samples");
    }
    const int periods = default_transient_periods(d);
    auto log_int = [&](double t) { return log_int_tau_quadrature(s, d, t, periods, 1e-9); };

    constexpr int kScan = 2048;
    double best_tau = 0.0;
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 1; k < kScan; ++k) {
        const double t = kTwoPi * k / kScan;
        const double v = log_int(t);
        if (v > best) {
            best = v;
            best_tau = t;
        }
    }
    // Golden-section refinement of the peak.
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = best_tau - kTwoPi / kScan;
    double hi = best_tau + kTwoPi / kScan;
    double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
    double f1 = log_int(x1), f2 = log_int(x2);
    while (hi - lo > 1e-12) {
        if (f1 < f2) {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = log_int(x2);
        } else {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = log_int(x1);
        }
    }
    WidthFit out;
    out.tau_peak = 0.5 * (lo + hi);
    out.log_peak = log_int(out.tau_peak);

    // Window edges where the profile has dropped by exp(-2).
    const double target = out.log_peak - 2.0;
    auto edge = [&](double direction) {
        double inner = 0.0;
        double outer = direction * 1e-3;
        while (log_int(out.tau_peak + outer) > target) {
            inner = outer;
            outer *= 2.0;
            if (std::abs(outer) > std::numbers::pi) {
                throw NumericalError(ErrorKind::NoConvergence, "pulse does not decay within half a period");
            }
        }
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (inner + outer);
            (log_int(out.tau_peak + mid) > target ? inner : outer) = mid;
        }
        return out.tau_peak + 0.5 * (inner + outer);
    };
    const double left = edge(-1.0);
    const double right = edge(+1.0);

    Eigen::MatrixXd design(samples, 3);
    Eigen::VectorXd rhs(samples);
    for (int k = 0; k < samples; ++k) {
        const double t = left + (right - left) * k / (samples - 1);
        const double x = t - out.tau_peak;
        design(k, 0) = x * x;
        design(k, 1) = x;
        design(k, 2) = 1.0;
        rhs[k] = log_int(t) - out.log_peak;
    }
    const Eigen::Vector3d fit = design.colPivHouseholderQr().solve(rhs);
    if (!(fit[0] < 0.0)) {
        throw NumericalError(ErrorKind::NoConvergence, "log-profile is not concave near its maximum");
    }
    out.sigma = 1.0 / std::sqrt(-2.0 * fit[0]);
    return out;
}

} // namespace superlase
