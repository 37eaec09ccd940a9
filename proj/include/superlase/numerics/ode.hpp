#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace superlase::numerics {

using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

/// Called after every accepted step with the new state and its derivative.
/// Returning false stops the integration early.
using OdeObserver = std::function<bool(double t, std::span<const double> y, std::span<const double> dydt)>;

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-14;
    double initial_step = 0.0; ///< 0 selects a step from the derivative scale
    double max_step = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 50'000'000;
};

struct OdeStats {
    double t_reached = 0.0;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_evaluations = 0;
    bool stopped_by_observer = false;
};

/// Dormand-Prince 5(4) with FSAL and elementwise mixed error control.
/// y is advanced in place from t0 towards t1.
OdeStats integrate_dopri5(const OdeRhs& rhs, std::vector<double>& y, double t0, double t1,
                          const OdeOptions& options = {}, const OdeObserver& observer = {});

} // namespace superlase::numerics
