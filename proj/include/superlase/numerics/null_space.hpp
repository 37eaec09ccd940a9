#pragma once

#include <Eigen/Sparse>

#include <span>

namespace superlase::numerics {

struct NullSpaceOptions {
    /// Accept v when ||A v||_inf <= residual_tol * ||A||_inf * ||v||_inf.
    double residual_tol = 1e-10;
    /// Estimated cond(bordered system) above this marks a degenerate kernel.
    double degeneracy_threshold = 1e12;
    int refinement_steps = 2;
    int power_iterations = 12;
};

struct NullSpaceResult {
    Eigen::VectorXd vector;
    double residual = 0.0;          ///< ||A v||_inf / (||A||_inf ||v||_inf)
    double condition_estimate = 0.0; ///< of the bordered system
    Eigen::Index pivot_row = 0;     ///< row replaced by the trace functional
};

/**
 * Null vector of a square sparse operator normalised so that trace . v = 1.
 *
 * One row of A, the one where the trace functional is largest, is replaced
 * by the functional and the bordered system is solved by sparse LU with
 * iterative refinement (residuals accumulated in long double). A
 * one-dimensional kernel is verified rather than assumed: a singular or
 * ill-conditioned bordered system raises NullSpaceDegenerate, and a solution
 * that A does not annihilate raises NoNullVector.
 */
NullSpaceResult null_space_solve(const Eigen::SparseMatrix<double>& op, std::span<const double> trace,
                                 const NullSpaceOptions& options = {});

} // namespace superlase::numerics
