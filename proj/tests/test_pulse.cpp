#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "superlase/errors.hpp"
#include "superlase/numerics/quadrature.hpp"
#include "superlase/params.hpp"
#include "superlase/pulse.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace superlase;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Case {
    double p;
    double c;
    double s() const { return pulse_s(c, p); }
    double d() const { return pulse_d(c, p); }
};

// Int at phase tau after `periods` whole periods, integrating the defining
// expression over the full unfolded range.
double unfolded_int(double s, double d, double tau, int periods)
{
    const double t_end = tau + kTwoPi * periods;
    auto f = [&](double t) {
        const double c = std::cos(0.5 * t);
        return c * c * std::exp(d * (t - t_end) + s * (std::sin(t) - std::sin(t_end)));
    };
    double total = 0.0;
    for (int k = 0; k < periods; ++k) {
        total += numerics::adaptive_quadrature(f, kTwoPi * k, kTwoPi * (k + 1), 1e-12);
    }
    total += numerics::adaptive_quadrature(f, kTwoPi * periods, t_end, 1e-12);
    const double h = std::sin(0.5 * tau);
    return h * h * total;
}

ErrorKind kind_of(auto&& call)
{
    try {
        call();
    } catch (const NumericalError& e) {
        return e.kind();
    } catch (const InvalidArgument&) {
        return ErrorKind::InvalidArgument;
    }
    FAIL("no error raised");
    return ErrorKind::InvalidArgument;
}

} // namespace

TEST_CASE("exponent u")
{
    CHECK(exponent_u(0.0, 10.6066, 3.5355) == 0.0);
    CHECK(exponent_u(kTwoPi, 10.6066, 3.5355) == doctest::Approx(-3.5355 * std::numbers::pi).epsilon(1e-12));
    CHECK(exponent_u(0.5 * std::numbers::pi, 4.0, 0.0) == doctest::Approx(-2.0));
    // Int carries exp(2u): one period multiplies it by exp(-2 pi d).
    const Case k{0.1, 0.5};
    CHECK(2.0 * exponent_u(kTwoPi, k.s(), k.d()) == doctest::Approx(-kTwoPi * k.d()));
}

TEST_CASE("quadrature: zero phase and folding against the unfolded integral")
{
    for (Case k : {Case{0.5, 0.5}, Case{2.0, 0.5}, Case{1.0, 0.2}}) {
        const int periods = default_transient_periods(k.d());
        CHECK(int_tau_quadrature(k.s(), k.d(), 0.0, periods) == 0.0);
        for (double tau : {0.3, 1.9, 3.0, 4.4, 6.0}) {
            const double folded = int_tau_quadrature(k.s(), k.d(), tau, periods);
            const double direct = unfolded_int(k.s(), k.d(), tau, periods);
            CHECK(folded == doctest::Approx(direct).epsilon(1e-9));
        }
    }
}

TEST_CASE("quadrature: asymptotic periodicity")
{
    for (Case k : {Case{0.1, 0.5}, Case{0.5, 0.5}, Case{2.0, 0.5}, Case{0.1, 0.9}}) {
        const int periods = default_transient_periods(k.d());
        CHECK(std::exp(-kTwoPi * k.d() * periods) < 1e-14);
        for (double tau : {0.7, 2.2, 4.1, 5.5}) {
            const double a = int_tau_quadrature(k.s(), k.d(), tau, periods);
            const double b = int_tau_quadrature(k.s(), k.d(), tau, periods + 1);
            const double shifted = int_tau_quadrature(k.s(), k.d(), tau + kTwoPi, periods);
            CHECK(std::abs(a - b) <= 1e-9 * a);
            CHECK(std::abs(a - shifted) <= 1e-9 * a);
        }
    }
}

TEST_CASE("series: zero phase, realness and agreement with quadrature")
{
    for (Case k : {Case{0.1, 0.5}, Case{0.5, 0.5}, Case{2.0, 0.5}, Case{0.1, 0.9}}) {
        CHECK(int_tau_series(k.s(), k.d(), 0.0) == 0.0);
        CHECK(int_tau_series(k.s(), k.d(), kTwoPi) == doctest::Approx(0.0));
        const int periods = default_transient_periods(k.d());
        for (int j = 0; j < 40; ++j) {
            const double tau = kTwoPi * (j + 0.5) / 40.0;
            const auto terms = int_tau_series_terms(k.s(), k.d(), tau, 200);
            CHECK(terms.imag_residual <= 1e-10);
            const double series = int_tau_series(k.s(), k.d(), tau);
            const double quad = int_tau_quadrature(k.s(), k.d(), tau, periods);
            CHECK(std::abs(series - quad) <= 1e-6 * quad);
        }
    }
    const Case peak{0.1, 0.5};
    const double tau_max = gaussian_approx(peak.s(), peak.d()).tau_max;
    CHECK(int_tau_series(peak.s(), peak.d(), tau_max)
          == doctest::Approx(int_tau_quadrature(peak.s(), peak.d(), tau_max, 20)).epsilon(1e-6));
}

TEST_CASE("profile: non-negative, both methods")
{
    const auto grid = phase_grid(200);
    CHECK(grid.size() == 200);
    CHECK(grid[0] == 0.0);
    for (Case k : {Case{0.1, 0.5}, Case{2.0, 0.5}, Case{0.1, 0.9}}) {
        for (auto method : {PulseMethod::BesselSeries, PulseMethod::Quadrature}) {
            const auto profile = pulse_profile(k.s(), k.d(), grid, method);
            CHECK(profile.values[0] == 0.0);
            double peak = 0.0;
            for (double v : profile.values) {
                peak = std::max(peak, v);
            }
            for (double v : profile.values) {
                CHECK(v >= -1e-12 * peak);
            }
            if (method == PulseMethod::BesselSeries) {
                CHECK(profile.truncation > 0);
            } else {
                CHECK(profile.transient_periods == default_transient_periods(k.d()));
            }
        }
    }
}

TEST_CASE("series: cancellation and truncation are reported")
{
    const Case sharp{0.01, 0.5};
    const double tau = gaussian_approx(sharp.s(), sharp.d()).tau_max;
    CHECK(kind_of([&] { int_tau_series(sharp.s(), sharp.d(), tau); }) == ErrorKind::PrecisionLoss);
    const Case k{0.1, 0.9};
    CHECK(kind_of([&] { int_tau_series(k.s(), k.d(), 4.0, 3); }) == ErrorKind::TruncationNotConverged);
    CHECK(kind_of([&] { int_tau_series(1.0, -0.2, 1.0); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([&] { int_tau_quadrature(1.0, 0.5, 1.0, 2); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([&] { int_tau_series_terms(1.0, 0.5, 1.0, 0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("quadrature stays finite where the series cannot")
{
    const Case sharp{0.01, 0.5};
    const auto g = gaussian_approx(sharp.s(), sharp.d());
    const double v = int_tau_quadrature(sharp.s(), sharp.d(), g.tau_max, default_transient_periods(sharp.d()));
    CHECK(std::isfinite(v));
    CHECK(std::log(v) == doctest::Approx(g.log_peak_height).epsilon(1e-3));
    const Case extreme{0.001, 0.5};
    CHECK(kind_of([&] {
              int_tau_quadrature(extreme.s(), extreme.d(), 4.37, default_transient_periods(extreme.d()));
          })
          == ErrorKind::OverflowGuard);
}

TEST_CASE("gaussian estimate")
{
    const Case half{0.1, 0.5};
    const auto g = gaussian_approx(half.s(), half.d());
    CHECK(g.epsilon == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(g.tau_max == doctest::Approx(4.3726).epsilon(1e-4));
    CHECK(std::cos(g.tau_max) == doctest::Approx(-1.0 / 3.0));
    CHECK(std::sin(g.tau_max) == doctest::Approx(-0.9428).epsilon(1e-4));
    CHECK(std::cos(g.tau_min) == doctest::Approx(-1.0 / 3.0));
    CHECK(std::sin(g.tau_min) > 0.0);
    CHECK(g.value(g.tau_max) == doctest::Approx(g.peak_height));

    const Case symmetric{0.3, 1.0};
    const auto sym = gaussian_approx(symmetric.s(), 0.0);
    CHECK(sym.tau_max == doctest::Approx(1.5 * std::numbers::pi));
    CHECK(sym.tau_min == doctest::Approx(0.5 * std::numbers::pi));

    const Case narrow{0.01, 0.5};
    CHECK(gaussian_approx(narrow.s(), narrow.d()).width == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(kind_of([] { gaussian_approx(1.0, 2.0); }) == ErrorKind::EpsilonOutOfRange);
}

TEST_CASE("gaussian peak height uses tau_min from the same period")
{
    for (Case k : {Case{0.005, 0.5}, Case{0.01, 0.5}, Case{0.01, 0.9}}) {
        const auto g = gaussian_approx(k.s(), k.d());
        const auto fit = fit_pulse_width(k.s(), k.d());
        // Residual is O(p); the previous-period choice would be off by 2 pi d.
        CHECK(std::abs(g.log_peak_height - fit.log_peak) <= 2.0 * k.p);
        CHECK(kTwoPi * k.d() > 30.0);
    }
}

TEST_CASE("fitted width is sqrt(p) and independent of c")
{
    const Case a{0.01, 0.5};
    const Case b{0.01, 0.9};
    const auto fa = fit_pulse_width(a.s(), a.d());
    const auto fb = fit_pulse_width(b.s(), b.d());
    CHECK(std::abs(fa.sigma - 0.1) <= 0.01);
    CHECK(std::abs(fa.sigma - fb.sigma) <= 0.1 * fa.sigma);
    CHECK(std::abs(fa.tau_peak - gaussian_approx(a.s(), a.d()).tau_max) <= 0.05);
}
