#include "superlase/numerics/null_space.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include "superlase/errors.hpp"

namespace superlase::numerics {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

double inf_norm(const SpMat& a)
{
    Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(a.rows());
    for (Eigen::Index k = 0; k < a.outerSize(); ++k) {
        for (SpMat::InnerIterator it(a, k); it; ++it) {
            row_sums[it.row()] += std::abs(it.value());
        }
    }
    return row_sums.size() ? row_sums.maxCoeff() : 0.0;
}

/// rhs - B x with long double accumulation.
Eigen::VectorXd refined_residual(const SpMat& b, const Eigen::VectorXd& x, const Eigen::VectorXd& rhs)
{
    std::vector<long double> acc(static_cast<std::size_t>(b.rows()), 0.0L);
    for (Eigen::Index k = 0; k < b.outerSize(); ++k) {
        for (SpMat::InnerIterator it(b, k); it; ++it) {
            acc[static_cast<std::size_t>(it.row())] +=
                static_cast<long double>(it.value()) * static_cast<long double>(x[it.col()]);
        }
    }
    Eigen::VectorXd r(b.rows());
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
        r[i] = static_cast<double>(static_cast<long double>(rhs[i]) - acc[static_cast<std::size_t>(i)]);
    }
    return r;
}

} // namespace

NullSpaceResult null_space_solve(const SpMat& op, std::span<const double> trace, const NullSpaceOptions& options)
{
    const Eigen::Index n = op.rows();
    if (op.cols() != n || n == 0) {
        throw InvalidArgument("null_space_solve needs a non-empty square operator");
    }
    if (static_cast<Eigen::Index>(trace.size()) != n) {
        throw InvalidArgument("trace functional length does not match operator");
    }

    Eigen::Index pivot = 0;
    for (Eigen::Index i = 1; i < n; ++i) {
        if (std::abs(trace[static_cast<std::size_t>(i)]) > std::abs(trace[static_cast<std::size_t>(pivot)])) {
            pivot = i;
        }
    }
    if (trace[static_cast<std::size_t>(pivot)] == 0.0) {
        throw InvalidArgument("trace functional is identically zero");
    }

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(op.nonZeros() + n));
    for (Eigen::Index k = 0; k < op.outerSize(); ++k) {
        for (SpMat::InnerIterator it(op, k); it; ++it) {
            if (it.row() != pivot) {
                triplets.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
            }
        }
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        if (trace[static_cast<std::size_t>(j)] != 0.0) {
            triplets.emplace_back(static_cast<int>(pivot), static_cast<int>(j), trace[static_cast<std::size_t>(j)]);
        }
    }
    SpMat bordered(n, n);
    bordered.setFromTriplets(triplets.begin(), triplets.end());
    bordered.makeCompressed();

    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(bordered);
    lu.factorize(bordered);
    if (lu.info() != Eigen::Success) {
        throw NumericalError(ErrorKind::NullSpaceDegenerate,
                             "bordered system is singular: kernel is not one-dimensional (" + lu.lastErrorMessage() + ")");
    }

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs[pivot] = 1.0;
    Eigen::VectorXd v = lu.solve(rhs);
    if (!v.allFinite()) {
        throw NumericalError(ErrorKind::NullSpaceDegenerate, "bordered solve produced non-finite values");
    }
    for (int step = 0; step < options.refinement_steps; ++step) {
        v += lu.solve(refined_residual(bordered, v, rhs));
    }

    // Inverse power iteration: growth of B^{-1} on a fixed pseudo-random start.
    std::mt19937_64 rng(0x5eedULL);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    Eigen::VectorXd probe(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        probe[i] = uniform(rng);
    }
    probe /= probe.norm();
    double growth = 0.0;
    for (int it = 0; it < options.power_iterations; ++it) {
        Eigen::VectorXd next = lu.solve(probe);
        growth = next.norm();
        if (!std::isfinite(growth) || growth == 0.0) {
            growth = std::numeric_limits<double>::infinity();
            break;
        }
        probe = next / growth;
    }

    NullSpaceResult out;
    out.pivot_row = pivot;
    out.condition_estimate = growth * inf_norm(bordered);
    if (!(out.condition_estimate <= options.degeneracy_threshold)) {
        std::ostringstream msg;
        msg << "bordered system condition estimate " << out.condition_estimate
            << " exceeds " << options.degeneracy_threshold << ": kernel is not one-dimensional";
        throw NumericalError(ErrorKind::NullSpaceDegenerate, msg.str());
    }

    const Eigen::VectorXd image = op * v;
    const double scale = inf_norm(op) * v.lpNorm<Eigen::Infinity>();
    out.residual = scale > 0.0 ? image.lpNorm<Eigen::Infinity>() / scale : image.lpNorm<Eigen::Infinity>();
    if (!(out.residual <= options.residual_tol)) {
        std::ostringstream msg;
        msg << "relative residual " << out.residual << " exceeds " << options.residual_tol
            << ": operator has no null vector with non-zero trace";
        throw NumericalError(ErrorKind::NoNullVector, msg.str());
    }
    out.vector = std::move(v);
    return out;
}

} // namespace superlase::numerics
