#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "superlase/errors.hpp"

namespace superlase::numerics {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    double l1_norm = 0.0;
};

inline constexpr unsigned kQuadratureMaxDepth = 20;

/// Below this, Kronrod error estimates sit at the roundoff floor and the
/// bisection only burns evaluations.
inline constexpr double kQuadratureTolFloor = 1e-12;

/// Adaptive 15-point Gauss-Kronrod on [a, b] with relative tolerance rel_tol
/// measured against the L1 norm of the integrand. Node placement depends only
/// on the integrand values, so results are bit-reproducible.
template <class F>
QuadratureResult adaptive_quadrature_detail(F&& f, double a, double b, double rel_tol)
{
    if (a == b) {
        return {};
    }
    if (!(rel_tol > 0.0)) {
        throw InvalidArgument("quadrature tolerance must be positive");
    }
    QuadratureResult out;
    // Boost accepts panels against their local estimate, so the summed error
    // can overshoot; subdividing to a tighter target keeps it below rel_tol.
    const double target = std::max(rel_tol / 16.0, kQuadratureTolFloor);
    out.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, kQuadratureMaxDepth, target, &out.error_estimate, &out.l1_norm);
    if (!std::isfinite(out.value)) {
        throw NumericalError(ErrorKind::QuadratureNoConvergence, "non-finite integral");
    }
    // Allow a small roundoff floor for integrals that vanish by cancellation.
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * out.l1_norm;
    if (out.error_estimate > rel_tol * out.l1_norm + floor) {
        std::ostringstream msg;
        msg << "error estimate " << out.error_estimate << " exceeds tolerance on [" << a << ", " << b << "]";
        throw NumericalError(ErrorKind::QuadratureNoConvergence, msg.str());
    }
    return out;
}

template <class F>
double adaptive_quadrature(F&& f, double a, double b, double rel_tol)
{
    return adaptive_quadrature_detail(std::forward<F>(f), a, b, rel_tol).value;
}

} // namespace superlase::numerics
