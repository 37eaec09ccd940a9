#include "superlase/numerics/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "superlase/errors.hpp"
#include "superlase/kernels/kernels.hpp"

namespace superlase::numerics {

namespace {

// Dormand-Prince tableau.
constexpr std::array<double, 7> kC{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// Fifth-order weights minus embedded fourth-order weights.
constexpr std::array<double, 7> kE{71.0 / 57600,      0.0,          -71.0 / 16695, 71.0 / 1920,
                                   -17253.0 / 339200, 22.0 / 525,   -1.0 / 40};

} // namespace

OdeStats integrate_dopri5(const OdeRhs& rhs, std::vector<double>& y, double t0, double t1,
                          const OdeOptions& options, const OdeObserver& observer)
{
    if (!(t1 >= t0)) {
        throw InvalidArgument("integration interval must be forward in time");
    }
    const std::size_t n = y.size();
    const auto& kern = kernels::active();

    std::array<std::vector<double>, 7> k;
    for (auto& stage : k) {
        stage.assign(n, 0.0);
    }
    std::vector<double> stage_y(n), y_new(n), err(n), zeros(n, 0.0);

    OdeStats stats;
    stats.t_reached = t0;
    if (t1 == t0 || n == 0) {
        return stats;
    }

    rhs(t0, y, k[0]);
    ++stats.rhs_evaluations;

    double h = options.initial_step;
    if (!(h > 0.0)) {
        const double f_norm = kern.max_abs(n, k[0].data());
        const double y_norm = kern.max_abs(n, y.data());
        h = f_norm > 0.0 ? 0.01 * std::max(y_norm, options.atol / options.rtol) / f_norm : (t1 - t0);
    }
    h = std::min({h, options.max_step, t1 - t0});

    const double* stage_ptrs[7];
    for (std::size_t j = 0; j < 7; ++j) {
        stage_ptrs[j] = k[j].data();
    }

    double t = t0;
    while (t < t1) {
        if (stats.accepted + stats.rejected >= options.max_steps) {
            throw NumericalError(ErrorKind::NoConvergence, "ODE step budget exhausted");
        }
        const bool last = t + h >= t1;
        if (last) {
            h = t1 - t;
        }
        for (std::size_t s = 1; s < 7; ++s) {
            kern.combine(n, y.data(), h, s, stage_ptrs, kA[s], s == 6 ? y_new.data() : stage_y.data());
            rhs(t + kC[s] * h, s == 6 ? y_new : stage_y, k[s]);
            ++stats.rhs_evaluations;
        }
        // err = h * sum_j E_j k_j
        kern.combine(n, zeros.data(), h, 7, stage_ptrs, kE.data(), err.data());
        const double err_norm = kern.error_norm(n, err.data(), y.data(), y_new.data(), options.atol, options.rtol);

        if (!std::isfinite(err_norm)) {
            throw NumericalError(ErrorKind::NoConvergence, "non-finite ODE error estimate");
        }
        if (err_norm <= 1.0) {
            t = last ? t1 : t + h;
            y.swap(y_new);
            k[0].swap(k[6]);
            stage_ptrs[0] = k[0].data();
            stage_ptrs[6] = k[6].data();
            ++stats.accepted;
            stats.t_reached = t;
            if (observer && !observer(t, y, k[0])) {
                stats.stopped_by_observer = true;
                break;
            }
            const double factor = err_norm > 0.0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
            h *= std::clamp(factor, 0.2, 5.0);
        } else {
            ++stats.rejected;
            h *= std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 1.0);
        }
        h = std::min(h, options.max_step);
        if (h < 1e-14 * std::max(1.0, std::abs(t))) {
            throw NumericalError(ErrorKind::NoConvergence, "ODE step size underflow");
        }
    }
    return stats;
}

} // namespace superlase::numerics
