#include "superlase/steady_state.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "superlase/errors.hpp"
#include "superlase/numerics/ode.hpp"

namespace superlase {

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(int N) : space_(N), entries_(space_.matrix_dim(), 0.0)
{
}

DensityMatrix DensityMatrix::ground_state(int N)
{
    DensityMatrix rho(N);
    rho({0, 0, 0}) = 1.0;
    return rho;
}

double DensityMatrix::trace() const
{
    double sum = 0.0;
    for (int m = 0; m <= atoms(); ++m) {
        for (int l = 0; l + m <= atoms(); ++l) {
            sum += (*this)({l, m, l});
        }
    }
    return sum;
}

double DensityMatrix::asymmetry() const
{
    double worst = 0.0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const MatrixIndex idx = space_.matrix_index(i);
        worst = std::max(worst, std::abs(entries_[i] - (*this)({idx.r, idx.m, idx.l})));
    }
    return worst;
}

double DensityMatrix::min_block_eigenvalue() const
{
    double lowest = std::numeric_limits<double>::infinity();
    for (int m = 0; m <= atoms(); ++m) {
        const int side = space_.block_size(m);
        Eigen::MatrixXd block(side, side);
        for (int l = 0; l < side; ++l) {
            for (int r = 0; r < side; ++r) {
                block(l, r) = (*this)({l, m, r});
            }
        }
        const Eigen::MatrixXd sym = 0.5 * (block + block.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
        lowest = std::min(lowest, solver.eigenvalues().minCoeff());
    }
    return lowest;
}

double max_entry_difference(const DensityMatrix& a, const DensityMatrix& b)
{
    if (a.atoms() != b.atoms()) {
        throw InvalidArgument("density matrices for different atom numbers");
    }
    double worst = 0.0;
    const auto x = a.entries();
    const auto y = b.entries();
    for (std::size_t i = 0; i < x.size(); ++i) {
        worst = std::max(worst, std::abs(x[i] - y[i]));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Generator

const char* to_string(GeneratorForm form) noexcept
{
    switch (form) {
    case GeneratorForm::FirstPrinciples: return "first-principles";
    case GeneratorForm::LiteralRecurrence: return "literal-recurrence";
    }
    return "?";
}

Generator::Generator(int N, double c, double p, GeneratorForm form, Matrix matrix)
    : N_(N), c_(c), p_(p), form_(form), matrix_(std::move(matrix))
{
    matrix_.makeCompressed();
}

kernels::CsrView Generator::csr() const noexcept
{
    return {static_cast<std::size_t>(matrix_.rows()), static_cast<std::size_t>(matrix_.cols()),
            matrix_.outerIndexPtr(), matrix_.innerIndexPtr(), matrix_.valuePtr()};
}

double Generator::coefficient(MatrixIndex row, MatrixIndex col) const
{
    const SymmetricSpace space(N_);
    return matrix_.coeff(static_cast<Eigen::Index>(space.offset(row)), static_cast<Eigen::Index>(space.offset(col)));
}

void Generator::apply(std::span<const double> rho, std::span<double> out) const
{
    if (rho.size() != dimension() || out.size() != dimension()) {
        throw InvalidArgument("generator applied to a vector of the wrong length");
    }
    kernels::csr_matvec(csr(), rho, out);
}

double Generator::trace_defect() const
{
    const SymmetricSpace space(N_);
    std::vector<double> column_sums(dimension(), 0.0);
    for (Eigen::Index row = 0; row < matrix_.outerSize(); ++row) {
        const MatrixIndex idx = space.matrix_index(static_cast<std::size_t>(row));
        if (idx.l != idx.r) {
            continue;
        }
        for (Matrix::InnerIterator it(matrix_, row); it; ++it) {
            column_sums[static_cast<std::size_t>(it.col())] += it.value();
        }
    }
    double worst = 0.0;
    for (double v : column_sums) {
        worst = std::max(worst, std::abs(v));
    }
    return worst;
}

double Generator::hermiticity_defect() const
{
    const SymmetricSpace space(N_);
    auto mirror = [&](Eigen::Index offset) {
        const MatrixIndex idx = space.matrix_index(static_cast<std::size_t>(offset));
        return static_cast<Eigen::Index>(space.offset({idx.r, idx.m, idx.l}));
    };
    double worst = 0.0;
    for (Eigen::Index row = 0; row < matrix_.outerSize(); ++row) {
        for (Matrix::InnerIterator it(matrix_, row); it; ++it) {
            const double partner = matrix_.coeff(mirror(row), mirror(it.col()));
            worst = std::max(worst, std::abs(it.value() - partner));
        }
    }
    return worst;
}

namespace {

void validate_model(int N, double c, double p)
{
    if (N < 1) {
        throw InvalidArgument("atom number N must be >= 1");
    }
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw InvalidArgument("coupling ratio c must be positive");
    }
    if (!(p >= 0.0) || !std::isfinite(p)) {
        throw InvalidArgument("pump strength p must be non-negative");
    }
}

/// Applies a product of collective operators to a state, rightmost first.
std::optional<Transition> apply_chain(int N, std::initializer_list<CollectiveOp> chain, StateIndex state)
{
    Transition acc{state, 1.0};
    for (CollectiveOp op : chain) {
        const auto step = op_element(N, op, acc.target);
        if (!step) {
            return std::nullopt;
        }
        acc.target = step->target;
        acc.amplitude *= step->amplitude;
    }
    return acc;
}

struct LindbladTerm {
    double weight;
    std::initializer_list<CollectiveOp> left;  // applied to the ket
    std::initializer_list<CollectiveOp> right; // adjoint chain applied to the bra
};

Generator::Matrix assemble_first_principles(int N, double c, double p)
{
    using Op = CollectiveOp;
    const double pump = p * N * std::sqrt(c);
    // E X = |ket> (X^dagger |bra>)^dagger, so the right chain lists the
    // adjoints of X's factors in application order.
    const LindbladTerm terms[] = {
        // pump * [S02 - S20, E]
        {+pump, {Op::S02}, {}},
        {-pump, {Op::S20}, {}},
        {-pump, {}, {Op::S20}},
        {+pump, {}, {Op::S02}},
        // c * (2 S12 E S21 - S21 S12 E - E S21 S12)
        {2.0 * c, {Op::S12}, {Op::S12}},
        {-c, {Op::S12, Op::S21}, {}},
        {-c, {}, {Op::S12, Op::S21}},
        // 2 S01 E S10 - S10 S01 E - E S10 S01
        {2.0, {Op::S01}, {Op::S01}},
        {-1.0, {Op::S01, Op::S10}, {}},
        {-1.0, {}, {Op::S01, Op::S10}},
    };

    const SymmetricSpace space(N);
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(space.matrix_dim() * 12);
    // Columns with l > r are the mirror images of l < r; emitting both from
    // one pass keeps the transpose symmetry bit-exact.
    for (std::size_t col = 0; col < space.matrix_dim(); ++col) {
        const MatrixIndex idx = space.matrix_index(col);
        if (idx.l > idx.r) {
            continue;
        }
        const auto mirror_col = space.offset({idx.r, idx.m, idx.l});
        const StateIndex ket{idx.l, idx.m};
        const StateIndex bra{idx.r, idx.m};
        for (const auto& term : terms) {
            if (term.weight == 0.0) {
                continue;
            }
            const auto k = apply_chain(N, term.left, ket);
            const auto b = apply_chain(N, term.right, bra);
            if (!k || !b) {
                continue;
            }
            if (k->target.m != b->target.m) {
                throw std::logic_error("Lindblad term leaves the m-diagonal ansatz");
            }
            const double value = term.weight * k->amplitude * b->amplitude;
            const auto row = space.offset({k->target.l, k->target.m, b->target.l});
            triplets.emplace_back(static_cast<int>(row), static_cast<int>(col), value);
            if (idx.l < idx.r) {
                const auto mirror_row = space.offset({b->target.l, k->target.m, k->target.l});
                triplets.emplace_back(static_cast<int>(mirror_row), static_cast<int>(mirror_col), value);
            }
        }
    }
    const auto n = static_cast<Eigen::Index>(space.matrix_dim());
    Generator::Matrix matrix(n, n);
    matrix.setFromTriplets(triplets.begin(), triplets.end());
    matrix.prune(0.0, 0.0);
    return matrix;
}

Generator::Matrix assemble_literal(int N, double c, double p)
{
    const double pump = p * N * std::sqrt(c);
    const SymmetricSpace space(N);
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(space.matrix_dim() * 8);

    for (std::size_t row = 0; row < space.matrix_dim(); ++row) {
        const auto [l, m, r] = space.matrix_index(row);
        auto add = [&](int cl, int cm, int cr, double value) {
            if (value == 0.0 || !is_valid(N, MatrixIndex{cl, cm, cr})) {
                return;
            }
            triplets.emplace_back(static_cast<int>(row), static_cast<int>(space.offset({cl, cm, cr})), value);
        };
        const double n_l = N - m - l;
        const double n_r = N - m - r;
        add(l - 1, m, r, pump * std::sqrt((n_l + 1.0) * l));
        add(l + 1, m, r, -pump * std::sqrt(n_l * (l + 1.0)));
        add(l, m, r - 1, pump * std::sqrt((n_r + 1.0) * r));
        add(l, m, r + 1, -pump * std::sqrt(n_r * (r + 1.0)));
        add(l + 1, m - 1, r + 1, c * 2.0 * m * std::sqrt((r + 1.0) * (l + 1.0)));
        add(l, m, r, -c * (m + 1.0) * (l + 1.0) - m * (2.0 * N - 2.0 * m + 2.0 - l - r));
        add(l, m + 1, r, 2.0 * (m + 1.0) * std::sqrt(n_l * n_r));
    }
    const auto n = static_cast<Eigen::Index>(space.matrix_dim());
    Generator::Matrix matrix(n, n);
    matrix.setFromTriplets(triplets.begin(), triplets.end());
    matrix.prune(0.0, 0.0);
    return matrix;
}

} // namespace

Generator assemble_generator(int N, double c, double p, GeneratorForm form)
{
    validate_model(N, c, p);
    auto matrix = form == GeneratorForm::FirstPrinciples ? assemble_first_principles(N, c, p)
                                                         : assemble_literal(N, c, p);
    return Generator(N, c, p, form, std::move(matrix));
}

CoefficientDiff diff_generator_forms(int N, double c, double p)
{
    const Generator literal = assemble_generator(N, c, p, GeneratorForm::LiteralRecurrence);
    const Generator derived = assemble_generator(N, c, p, GeneratorForm::FirstPrinciples);
    const SymmetricSpace space(N);

    const Generator::Matrix delta = literal.matrix() - derived.matrix();
    const double scale = std::max(1.0, derived.matrix().coeffs().cwiseAbs().maxCoeff());

    CoefficientDiff out;
    bool sign_flips_only = true;
    for (Eigen::Index row = 0; row < delta.outerSize(); ++row) {
        for (Generator::Matrix::InnerIterator it(delta, row); it; ++it) {
            if (std::abs(it.value()) <= 1e-12 * scale) {
                continue;
            }
            CoefficientMismatch mm;
            mm.row = space.matrix_index(static_cast<std::size_t>(row));
            mm.col = space.matrix_index(static_cast<std::size_t>(it.col()));
            mm.literal = literal.matrix().coeff(row, it.col());
            mm.derived = derived.matrix().coeff(row, it.col());
            const int moved = std::abs(mm.row.l - mm.col.l) + std::abs(mm.row.r - mm.col.r);
            if (mm.row == mm.col) {
                ++out.diagonal_mismatches;
            } else if (mm.row.m == mm.col.m && moved == 1) {
                ++out.pump_mismatches;
                if (std::abs(mm.literal + mm.derived) > 1e-12 * scale) {
                    sign_flips_only = false;
                }
            } else {
                ++out.other_mismatches;
            }
            out.mismatches.push_back(mm);
        }
    }
    out.pump_sign_convention_only = out.pump_mismatches > 0 && sign_flips_only;
    out.literal_trace_defect = literal.trace_defect();
    out.derived_trace_defect = derived.trace_defect();

    std::ostringstream verdict;
    if (out.empty()) {
        verdict << "forms agree";
    } else {
        verdict << out.mismatches.size() << " mismatching coefficients (" << out.diagonal_mismatches
                << " diagonal, " << out.pump_mismatches << " pump, " << out.other_mismatches << " other); ";
        verdict << "trace defect literal=" << out.literal_trace_defect
                << " derived=" << out.derived_trace_defect << "; ";
        if (out.derived_trace_defect <= 1e-12 && out.literal_trace_defect > 1e-12) {
            verdict << "derived form adopted: the literal diagonal c-term -(m+1)(l+1) does not conserve "
                       "the trace, the derived -(m+1)(l+r) does";
        } else {
            verdict << "trace test inconclusive";
        }
        if (out.pump_sign_convention_only) {
            verdict << "; pump terms differ only by the sign convention rho_{l,m,r} -> (-1)^(l+r) rho_{l,m,r}";
        }
    }
    out.verdict = verdict.str();
    return out;
}

// ---------------------------------------------------------------------------
// Stationary solve and observables

StationarySolution solve_stationary(const Generator& generator, const StationaryOptions& options)
{
    const int N = generator.atoms();
    if (generator.pump() == 0.0) {
        return {DensityMatrix::ground_state(N), 0.0, 0.0};
    }
    const SymmetricSpace space(N);
    std::vector<double> trace(space.matrix_dim(), 0.0);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const MatrixIndex idx = space.matrix_index(i);
        trace[i] = idx.l == idx.r ? 1.0 : 0.0;
    }
    const Eigen::SparseMatrix<double> op = generator.matrix();
    auto solved = numerics::null_space_solve(op, trace, options.null_space);

    StationarySolution out{DensityMatrix(N), solved.residual, solved.condition_estimate};
    auto entries = out.rho.entries();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        entries[i] = solved.vector[static_cast<Eigen::Index>(i)];
    }
    return out;
}

Observables observables(const DensityMatrix& rho)
{
    const int N = rho.atoms();
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    double q0 = 0.0, q1 = 0.0, q2 = 0.0;
    for (int m = 0; m <= N; ++m) {
        for (int l = 0; l + m <= N; ++l) {
            const double w = rho({l, m, l});
            const double n0 = N - m - l;
            m0 += w * n0;
            m1 += w * m;
            m2 += w * l;
            q0 += w * n0 * n0;
            q1 += w * m * m;
            q2 += w * l * l;
        }
    }
    return {m0, m1, m2, q0 - m0 * m0, q1 - m1 * m1, q2 - m2 * m2};
}

// ---------------------------------------------------------------------------
// Time-evolution oracle

namespace {

using SpCol = Eigen::SparseMatrix<double>;

SpCol operator_matrix(const SymmetricSpace& space, CollectiveOp op)
{
    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t j = 0; j < space.state_count(); ++j) {
        if (const auto t = op_element(space.atoms(), op, space.state(j))) {
            triplets.emplace_back(static_cast<int>(space.state_offset(t->target)), static_cast<int>(j), t->amplitude);
        }
    }
    const auto n = static_cast<Eigen::Index>(space.state_count());
    SpCol out(n, n);
    out.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

} // namespace

OracleResult evolve_oracle(int N, double c, double p, const DensityMatrix& rho0, const OracleOptions& options)
{
    validate_model(N, c, p);
    if (rho0.atoms() != N) {
        throw InvalidArgument("initial state has the wrong atom number");
    }
    const SymmetricSpace space(N);
    const auto D = static_cast<Eigen::Index>(space.state_count());
    const double pump = p * N * std::sqrt(c);

    const SpCol h = operator_matrix(space, CollectiveOp::S02) - operator_matrix(space, CollectiveOp::S20);
    const SpCol a = operator_matrix(space, CollectiveOp::S12);
    const SpCol a_dag = operator_matrix(space, CollectiveOp::S21);
    const SpCol b = operator_matrix(space, CollectiveOp::S01);
    const SpCol b_dag = operator_matrix(space, CollectiveOp::S10);
    const SpCol a_num = (a_dag * a).pruned();
    const SpCol b_num = (b_dag * b).pruned();

    std::vector<double> y(static_cast<std::size_t>(D * D), 0.0);
    {
        Eigen::Map<Eigen::MatrixXd> full(y.data(), D, D);
        for (std::size_t i = 0; i < space.matrix_dim(); ++i) {
            const MatrixIndex idx = space.matrix_index(i);
            full(static_cast<Eigen::Index>(space.state_offset({idx.l, idx.m})),
                 static_cast<Eigen::Index>(space.state_offset({idx.r, idx.m}))) = rho0.entries()[i];
        }
    }

    Eigen::MatrixXd tmp(D, D);
    auto rhs = [&](double, std::span<const double> state, std::span<double> dstate) {
        Eigen::Map<const Eigen::MatrixXd> rho(state.data(), D, D);
        Eigen::Map<Eigen::MatrixXd> out(dstate.data(), D, D);
        out.noalias() = pump * (h * rho);
        out.noalias() -= pump * (rho * h);
        tmp.noalias() = a * rho;
        out.noalias() += (2.0 * c) * (tmp * a_dag);
        out.noalias() -= c * (a_num * rho);
        out.noalias() -= c * (rho * a_num);
        tmp.noalias() = b * rho;
        out.noalias() += 2.0 * (tmp * b_dag);
        out.noalias() -= b_num * rho;
        out.noalias() -= rho * b_num;
    };

    const double trace0 = rho0.trace();
    OracleResult result{DensityMatrix(N)};
    double derivative_norm = std::numeric_limits<double>::infinity();
    auto observer = [&](double, std::span<const double> state, std::span<const double> dstate) {
        double tr = 0.0;
        for (Eigen::Index i = 0; i < D; ++i) {
            tr += state[static_cast<std::size_t>(i * D + i)];
        }
        result.max_trace_drift = std::max(result.max_trace_drift, std::abs(tr - trace0));
        derivative_norm = kernels::max_abs(dstate);
        return !(options.stop_when_relaxed && derivative_norm <= options.derivative_tol);
    };

    numerics::OdeOptions ode;
    ode.rtol = options.rtol;
    ode.atol = options.atol;
    const auto stats = numerics::integrate_dopri5(rhs, y, 0.0, options.horizon, ode, observer);

    result.t_reached = stats.t_reached;
    result.steps = stats.accepted;
    result.derivative_norm = derivative_norm;

    Eigen::Map<const Eigen::MatrixXd> full(y.data(), D, D);
    auto entries = result.rho.entries();
    for (std::size_t i = 0; i < space.matrix_dim(); ++i) {
        const MatrixIndex idx = space.matrix_index(i);
        entries[i] = full(static_cast<Eigen::Index>(space.state_offset({idx.l, idx.m})),
                          static_cast<Eigen::Index>(space.state_offset({idx.r, idx.m})));
    }
    for (Eigen::Index j = 0; j < D; ++j) {
        for (Eigen::Index i = 0; i < D; ++i) {
            if (space.state(static_cast<std::size_t>(i)).m != space.state(static_cast<std::size_t>(j)).m) {
                result.max_leakage = std::max(result.max_leakage, std::abs(full(i, j)));
            }
        }
    }

    if (!(derivative_norm <= options.derivative_tol)) {
        std::ostringstream msg;
        msg << "||d rho/dt||_inf = " << derivative_norm << " > " << options.derivative_tol << " at t = "
            << result.t_reached;
        throw NumericalError(ErrorKind::NotRelaxed, msg.str());
    }
    return result;
}

// ---------------------------------------------------------------------------
// Sweeps

std::vector<SweepRow> sweep_pump(int N, double c, std::span<const double> p_grid, unsigned threads)
{
    validate_model(N, c, 0.0);
    for (double p : p_grid) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw InvalidArgument("pump sweep values must lie in [0, 1]");
        }
    }
    std::vector<SweepRow> rows(p_grid.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;

    auto worker = [&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            try {
                const double p = p_grid[i];
                SweepRow row;
                row.p = p;
                row.quantum = observables(solve_stationary(assemble_generator(N, c, p)).rho);
                row.semiclassical = semiclassical_steady(N, c, p);
                row.perturbative = perturbative_occupations(N, c, p);
                rows[i] = row;
            } catch (...) {
                std::lock_guard lock(failure_lock);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };

    const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(rows.size())));
    if (count == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < count; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return rows;
}

HalfRise half_rise_pump(int N, double c, double tol)
{
    auto s22 = [&](double p) { return observables(solve_stationary(assemble_generator(N, c, p)).rho).S22; };

    constexpr int kGrid = 100;
    int best = 0;
    double best_value = 0.0;
    for (int k = 0; k <= kGrid; ++k) {
        const double v = s22(static_cast<double>(k) / kGrid);
        if (v > best_value) {
            best_value = v;
            best = k;
        }
    }

    // Golden-section refinement of the maximum.
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = std::max(0, best - 1) / static_cast<double>(kGrid);
    double hi = std::min(kGrid, best + 1) / static_cast<double>(kGrid);
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    double f1 = s22(x1);
    double f2 = s22(x2);
    while (hi - lo > tol) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = s22(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = s22(x1);
        }
    }
    HalfRise out;
    out.p_peak = 0.5 * (lo + hi);
    out.S22_peak = std::max({f1, f2, best_value});

    const double target = 0.5 * out.S22_peak;
    double a = 0.0;
    double b = out.p_peak;
    while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        if (s22(mid) < target) {
            a = mid;
        } else {
            b = mid;
        }
    }
    out.p_star = 0.5 * (a + b);
    return out;
}

} // namespace superlase
