#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "superlase/errors.hpp"
#include "superlase/numerics/bessel.hpp"
#include "superlase/numerics/null_space.hpp"
#include "superlase/numerics/ode.hpp"
#include "superlase/numerics/quadrature.hpp"
#include "superlase/steady_state.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <vector>

using namespace superlase;
using namespace superlase::numerics;

namespace {

// exp(-s) I_n(s) from the ascending series, term by term in log space.
long double series_bessel_scaled(int n, long double s)
{
    n = std::abs(n);
    if (s == 0.0L) {
        return n == 0 ? 1.0L : 0.0L;
    }
    const long double log_half = std::log(s / 2.0L);
    long double sum = 0.0L;
    for (int k = 0; k < 2000; ++k) {
        const long double log_term = (2.0L * k + n) * log_half - std::lgamma(k + 1.0L) - std::lgamma(k + n + 1.0L) - s;
        const long double term = std::exp(log_term);
        sum += term;
        if (k > s && term < 1e-22L * sum) {
            break;
        }
    }
    return sum;
}

double relative(double a, double b)
{
    return std::abs(a - b) / std::abs(b);
}

Eigen::SparseMatrix<double> sparse(const Eigen::MatrixXd& dense)
{
    return dense.sparseView();
}

} // namespace

TEST_CASE("bessel: trivial arguments")
{
    CHECK(bessel_i_scaled(0, 0.0) == 1.0);
    for (int n : {1, -1, 5, -17, 300}) {
        CHECK(bessel_i_scaled(n, 0.0) == 0.0);
    }
}

TEST_CASE("bessel: I_1(2) against the power series")
{
    const double oracle = static_cast<double>(series_bessel_scaled(1, 2.0L));
    CHECK(oracle == doctest::Approx(0.21526928924893765).epsilon(1e-14));
    CHECK(relative(bessel_i_scaled(1, 2.0), oracle) <= 1e-12);
}

TEST_CASE("bessel: power-series oracle for |n| <= 60, s <= 200")
{
    double worst = 0.0;
    for (double s : {0.01, 0.3, 1.0, 2.5, 7.0, 10.6066, 25.0, 53.0, 106.0, 150.0, 200.0}) {
        const auto table = bessel_i_scaled_table(60, s);
        for (int n = -60; n <= 60; ++n) {
            const double oracle = static_cast<double>(series_bessel_scaled(n, s));
            if (oracle < 1e-290) {
                continue;
            }
            const double single = bessel_i_scaled(n, s);
            worst = std::max(worst, relative(single, oracle));
            worst = std::max(worst, relative(table[static_cast<std::size_t>(std::abs(n))], oracle));
        }
    }
    MESSAGE("worst relative error " << worst);
    CHECK(worst <= 1e-12);
}

TEST_CASE("bessel: symmetry, recurrence and generating function")
{
    for (double s : {0.5, 3.0, 10.0, 50.0, 120.0, 200.0}) {
        for (int n = 0; n <= 80; ++n) {
            CHECK(bessel_i_scaled(n, s) == bessel_i_scaled(-n, s));
        }
        const auto table = bessel_i_scaled_table(default_truncation(s) + 2, s);
        for (int n = 1; n <= default_truncation(s); ++n) {
            const double lhs = table[n - 1] - table[n + 1];
            const double rhs = 2.0 * n / s * table[n];
            if (rhs > 1e-280) {
                CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));
            }
        }
        double total = table[0];
        for (int n = 1; n <= default_truncation(s); ++n) {
            total += 2.0 * table[n];
        }
        CHECK(std::abs(total - 1.0) <= 1e-10);
    }
}

TEST_CASE("bessel: large arguments stay finite and in [0, 1]")
{
    for (double s : {300.0, 500.0, 999.0}) {
        const auto table = bessel_i_scaled_table(400, s);
        for (double v : table) {
            CHECK(std::isfinite(v));
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        CHECK(table[0] == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi * s)).epsilon(1e-3));
    }
}

TEST_CASE("bessel: domain errors")
{
    CHECK_THROWS_AS(bessel_i_scaled(0, -1.0), InvalidArgument);
    try {
        bessel_i_scaled(0, kBesselMaxArgument * 2.0);
        FAIL("expected ArgumentOutOfRange");
    } catch (const NumericalError& e) {
        CHECK(e.kind() == ErrorKind::ArgumentOutOfRange);
    }
    try {
        bessel_i_scaled(kBesselMaxOrder + 1, 1.0);
        FAIL("expected ArgumentOutOfRange");
    } catch (const NumericalError& e) {
        CHECK(e.kind() == ErrorKind::ArgumentOutOfRange);
    }
}

TEST_CASE("quadrature: closed forms")
{
    const double two_pi = 2.0 * std::numbers::pi;
    const double half_sine = adaptive_quadrature([](double t) { return std::pow(std::sin(0.5 * t), 2); }, 0.0,
                                                 two_pi, 1e-12);
    CHECK(half_sine == doctest::Approx(std::numbers::pi).epsilon(1e-12));

    const double i0 = static_cast<double>(series_bessel_scaled(0, 5.0L)) * std::exp(5.0);
    CHECK(i0 == doctest::Approx(27.239871823604442).epsilon(1e-13));
    for (double tol : {1e-6, 1e-9, 1e-12}) {
        const double value = adaptive_quadrature([](double t) { return std::exp(5.0 * std::sin(t)); }, 0.0,
                                                 two_pi, tol);
        CHECK(std::abs(value - two_pi * i0) <= tol * two_pi * i0);
    }
    CHECK(two_pi * i0 == doctest::Approx(171.15).epsilon(1e-4));

    CHECK(adaptive_quadrature([](double) { return 1.0; }, 1.5, 1.5, 1e-9) == 0.0);
}

TEST_CASE("quadrature: Bessel identity family")
{
    const double two_pi = 2.0 * std::numbers::pi;
    for (double s : {0.5, 2.0, 10.0, 40.0}) {
        for (int n : {0, 1, 3}) {
            const auto r = adaptive_quadrature_detail(
                [&](double t) { return std::exp(s * (std::cos(t) - 1.0)) * std::cos(n * t); }, 0.0, two_pi,
                1e-10);
            const double expected = two_pi * static_cast<double>(series_bessel_scaled(n, s));
            CHECK(std::abs(r.value - expected) <= 1e-10 * r.l1_norm);
        }
    }
}

TEST_CASE("quadrature: divergent integrand is reported")
{
    CHECK_THROWS_AS(adaptive_quadrature([](double t) { return 1.0 / t; }, 0.0, 1.0, 1e-9), NumericalError);
    CHECK_THROWS_AS(adaptive_quadrature([](double t) { return t; }, 0.0, 1.0, 0.0), InvalidArgument);
}

TEST_CASE("null space: symmetric exchange")
{
    Eigen::MatrixXd a(2, 2);
    a << -1.0, 1.0, 1.0, -1.0;
    const std::vector<double> trace{1.0, 1.0};
    const auto r = null_space_solve(sparse(a), trace);
    CHECK(r.vector[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(r.vector[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("null space: two-dimensional kernel is degenerate")
{
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4, 4);
    a(0, 0) = -1.0;
    a(1, 0) = 1.0;
    a(2, 2) = -2.0;
    a(3, 2) = 2.0;
    const std::vector<double> trace(4, 1.0);
    try {
        null_space_solve(sparse(a), trace);
        FAIL("expected NullSpaceDegenerate");
    } catch (const NumericalError& e) {
        CHECK(e.kind() == ErrorKind::NullSpaceDegenerate);
    }
}

TEST_CASE("null space: operator without a kernel")
{
    Eigen::MatrixXd a(3, 3);
    a << 2.0, 1.0, 0.0, 0.0, 3.0, 1.0, 1.0, 0.0, 4.0;
    const std::vector<double> trace(3, 1.0);
    try {
        null_space_solve(sparse(a), trace);
        FAIL("expected NoNullVector");
    } catch (const NumericalError& e) {
        CHECK(e.kind() == ErrorKind::NoNullVector);
    }
}

TEST_CASE("null space: laser generator against a dense SVD oracle")
{
    for (int N : {1, 2, 3, 4}) {
        for (double c : {0.5, 2.0}) {
            for (double p : {0.05, 0.3, 0.9}) {
                const auto gen = assemble_generator(N, c, p);
                const Eigen::MatrixXd dense = Eigen::MatrixXd(gen.matrix());
                Eigen::JacobiSVD<Eigen::MatrixXd> svd(dense, Eigen::ComputeFullV);
                const auto& sigma = svd.singularValues();
                const Eigen::Index n = sigma.size();
                // One vanishing singular value, the next bounded away.
                CHECK(sigma[n - 2] >= 1e6 * std::max(sigma[n - 1], 1e-300));

                const SymmetricSpace space(N);
                std::vector<double> trace(space.matrix_dim(), 0.0);
                for (std::size_t k = 0; k < trace.size(); ++k) {
                    const auto idx = space.matrix_index(k);
                    trace[k] = idx.l == idx.r ? 1.0 : 0.0;
                }
                Eigen::VectorXd oracle = svd.matrixV().col(n - 1);
                double norm = 0.0;
                for (Eigen::Index k = 0; k < n; ++k) {
                    norm += trace[static_cast<std::size_t>(k)] * oracle[k];
                }
                oracle /= norm;

                const auto r = null_space_solve(Eigen::SparseMatrix<double>(gen.matrix()), trace);
                CHECK((r.vector - oracle).cwiseAbs().maxCoeff() <= 1e-10);
                CHECK(r.residual <= 1e-10);
            }
        }
    }
}

TEST_CASE("ode: exponential decay and oscillator")
{
    std::vector<double> y{1.0};
    const auto stats = integrate_dopri5([](double, std::span<const double> x, std::span<double> dx) { dx[0] = -x[0]; },
                                        y, 0.0, 5.0);
    CHECK(stats.t_reached == 5.0);
    CHECK(y[0] == doctest::Approx(std::exp(-5.0)).epsilon(1e-9));

    std::vector<double> osc{1.0, 0.0};
    integrate_dopri5(
        [](double, std::span<const double> x, std::span<double> dx) {
            dx[0] = x[1];
            dx[1] = -x[0];
        },
        osc, 0.0, 10.0);
    CHECK(osc[0] == doctest::Approx(std::cos(10.0)).epsilon(1e-8));
    CHECK(osc[1] == doctest::Approx(-std::sin(10.0)).epsilon(1e-8));
}

TEST_CASE("ode: observer can stop the integration")
{
    std::vector<double> y{1.0};
    const auto stats = integrate_dopri5(
        [](double, std::span<const double> x, std::span<double> dx) { dx[0] = -x[0]; }, y, 0.0, 100.0, {},
        [](double, std::span<const double> x, std::span<const double>) { return x[0] > 0.5; });
    CHECK(stats.stopped_by_observer);
    CHECK(stats.t_reached < 100.0);
    CHECK(y[0] <= 0.5);
    CHECK(y[0] == doctest::Approx(std::exp(-stats.t_reached)).epsilon(1e-9));
}

TEST_CASE("ode: step budget")
{
    std::vector<double> y{1.0};
    numerics::OdeOptions opts;
    opts.max_steps = 3;
    CHECK_THROWS_AS(integrate_dopri5([](double, std::span<const double> x, std::span<double> dx) { dx[0] = -x[0]; },
                                     y, 0.0, 1e4, opts),
                    NumericalError);
}
