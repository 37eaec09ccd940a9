#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "superlase/errors.hpp"
#include "superlase/semiclassics.hpp"

#include <cmath>

using namespace superlase;

TEST_CASE("semiclassical populations at N = 30, c = 2, p = 0.5")
{
    const auto st = semiclassical_steady(30, 2.0, 0.5);
    CHECK(st.S00 == 10.0);
    CHECK(st.S11 == 15.0);
    CHECK(st.S22 == 5.0);
    CHECK(std::abs(st.alpha - 1.0 / std::sqrt(3.0)) <= 1e-12);
}

TEST_CASE("semiclassical boundaries")
{
    const auto full = semiclassical_steady(12, 3.0, 1.0);
    CHECK(full.S11 == 12.0);
    CHECK(full.S22 == 0.0);
    CHECK(full.alpha == 0.0);

    // No pump, yet a finite level-2 population: the discontinuity at p = 0.
    const auto none = semiclassical_steady(12, 3.0, 0.0);
    CHECK(none.S22 == doctest::Approx(3.0));
    CHECK(none.S11 == 0.0);

    CHECK_THROWS_AS(semiclassical_steady(12, 3.0, 1.5), InvalidArgument);
    CHECK_THROWS_AS(semiclassical_steady(12, 3.0, -0.1), InvalidArgument);
    CHECK_THROWS_AS(semiclassical_steady(12, 0.0, 0.5), InvalidArgument);
}

TEST_CASE("regime classification")
{
    CHECK(classify_regime(2.0, 0.5) == Regime::StableStationary);
    CHECK(classify_regime(0.5, 0.1) == Regime::Pulsed);
    CHECK(classify_regime(1.0, 0.5) == Regime::Boundary);
    CHECK(classify_regime(2.0, 1.5) == Regime::Boundary);
    CHECK_THROWS_AS(classify_regime(0.0, 0.5), InvalidArgument);
}

TEST_CASE("property: occupations sum to N, alpha symmetric and peaked at p = 1/2")
{
    for (int N : {1, 7, 30, 1000}) {
        for (double c = 0.1; c < 30.0; c *= 1.7) {
            double best_p = -1.0;
            double best = -1.0;
            for (int k = 0; k <= 200; ++k) {
                const double p = k / 200.0;
                const auto st = semiclassical_steady(N, c, p);
                CHECK(std::abs(st.S00 + st.S11 + st.S22 - N) <= 1e-12 * N);
                const auto mirror = semiclassical_steady(N, c, 1.0 - p);
                CHECK(st.alpha == doctest::Approx(mirror.alpha).epsilon(1e-12));
                if (st.alpha * st.alpha > best) {
                    best = st.alpha * st.alpha;
                    best_p = p;
                }
            }
            CHECK(best_p == 0.5);
        }
    }
}
