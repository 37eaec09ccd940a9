#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "superlase/errors.hpp"
#include "superlase/perturbation.hpp"

#include <cmath>

using namespace superlase;

TEST_CASE("first-order coherence")
{
    const auto st = perturbative_expand(4, 1.0, 0.1);
    CHECK(st.coherence_0_21 == doctest::Approx(-0.8).epsilon(1e-14));
}

TEST_CASE("zeroth order is the ground state")
{
    const auto st = perturbative_expand(9, 2.0, 0.0);
    CHECK(st.pop_0 == 1.0);
    CHECK(st.pop_11 == 0.0);
    CHECK(st.pop_21 == 0.0);
    CHECK(st.coherence_0_21 == 0.0);
    CHECK(st.coherence_0_22 == 0.0);
    const auto occ = perturbative_occupations(9, 2.0, 0.0);
    CHECK(occ.S00 == 9.0);
    CHECK(occ.S11 == 0.0);
    CHECK(occ.S22 == 0.0);
}

TEST_CASE("second-order occupations at N = 10, c = 2")
{
    const auto occ = perturbative_occupations(10, 2.0, 0.01);
    CHECK(occ.S00 == doctest::Approx(9.94).epsilon(1e-14));
    CHECK(occ.S11 == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(occ.S22 == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(occ.total() == doctest::Approx(10.0).epsilon(1e-15));

    // p = 1/N: level 2 already holds O(N) atoms.
    CHECK(perturbative_occupations(10, 2.0, 0.1).S22 == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("second-order coherence and populations")
{
    const int N = 6;
    const double c = 3.0, p = 0.02;
    const auto st = perturbative_expand(N, c, p);
    CHECK(st.pop_21 == doctest::Approx(p * p * N * N * N / c));
    CHECK(st.pop_11 == doctest::Approx(p * p * N * N));
    CHECK(st.pop_0 == doctest::Approx(1.0 - p * p * N * N * (N + c) / c));
    CHECK(st.coherence_0_22 == doctest::Approx(p * p * N * N * N / c * std::sqrt((N - 1.0) / (2.0 * N))));
}

TEST_CASE("invalid inputs")
{
    CHECK_THROWS_AS(perturbative_expand(0, 2.0, 0.1), InvalidArgument);
    CHECK_THROWS_AS(perturbative_expand(3, 2.0, -0.1), InvalidArgument);
    CHECK_THROWS_AS(perturbative_occupations(3, 0.0, 0.1), InvalidArgument);
}

TEST_CASE("property: order-p^2 terms cancel in the trace over a 10x10 (N, c) grid")
{
    int points = 0;
    for (int N = 1; N <= 10; ++N) {
        for (int k = 0; k < 10; ++k) {
            const double c = 0.25 * std::pow(1.6, k);
            const auto occ = perturbative_occupations(N, c, 0.03);
            CHECK(std::abs(occ.total() - N) <= 1e-12 * N);
            ++points;
        }
    }
    CHECK(points == 100);
}
