#pragma once

#include <Eigen/Sparse>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "superlase/kernels/kernels.hpp"
#include "superlase/numerics/null_space.hpp"
#include "superlase/perturbation.hpp"
#include "superlase/semiclassics.hpp"
#include "superlase/symmetric_space.hpp"

namespace superlase {

/// Coefficients rho_{l,m,r} of sum rho_{l,m,r} |1^m;2^l><1^m;2^r|, stored in
/// SymmetricSpace order. All generator coefficients are real, so is rho.
class DensityMatrix {
public:
    explicit DensityMatrix(int N);

    static DensityMatrix ground_state(int N);

    int atoms() const noexcept { return space_.atoms(); }
    const SymmetricSpace& space() const noexcept { return space_; }

    double operator()(MatrixIndex index) const { return entries_[space_.offset(index)]; }
    double& operator()(MatrixIndex index) { return entries_[space_.offset(index)]; }

    std::span<const double> entries() const noexcept { return entries_; }
    std::span<double> entries() noexcept { return entries_; }

    double trace() const;
    /// max |rho_{l,m,r} - rho_{r,m,l}|
    double asymmetry() const;
    /// Smallest eigenvalue over the per-m blocks (l, r).
    double min_block_eigenvalue() const;

private:
    SymmetricSpace space_;
    std::vector<double> entries_;
};

/// max_i |a_i - b_i|
double max_entry_difference(const DensityMatrix& a, const DensityMatrix& b);

enum class GeneratorForm {
    /// Built from matrix elements of the three Lindblad terms.
    FirstPrinciples,
    /// Row-by-row transcription of the closed-form stationary recurrence, kept for comparison.
    LiteralRecurrence,
};

const char* to_string(GeneratorForm form) noexcept;

/**
 * Linear generator of the master equation restricted to the m-diagonal
 * ansatz. Time is measured in units of 1/gamma_b, so the pump enters as
 * p N sqrt(c) and the 2->1 decay as c.
 */
class Generator {
public:
    using Matrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

    Generator(int N, double c, double p, GeneratorForm form, Matrix matrix);

    int atoms() const noexcept { return N_; }
    double coupling() const noexcept { return c_; }
    double pump() const noexcept { return p_; }
    GeneratorForm form() const noexcept { return form_; }
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }

    const Matrix& matrix() const noexcept { return matrix_; }
    kernels::CsrView csr() const noexcept;

    double coefficient(MatrixIndex row, MatrixIndex col) const;

    /// out = G rho
    void apply(std::span<const double> rho, std::span<double> out) const;

    /// Largest |sum of a column's entries over diagonal rows (l = r)|.
    double trace_defect() const;
    /// Largest |G(l,m,r <- l',m',r') - G(r,m,l <- r',m',l')|.
    double hermiticity_defect() const;

private:
    int N_;
    double c_;
    double p_;
    GeneratorForm form_;
    Matrix matrix_;
};

Generator assemble_generator(int N, double c, double p, GeneratorForm form = GeneratorForm::FirstPrinciples);

struct CoefficientMismatch {
    MatrixIndex row;
    MatrixIndex col;
    double literal = 0.0;
    double derived = 0.0;
};

/// Entry-by-entry comparison of the two generator forms.
struct CoefficientDiff {
    std::vector<CoefficientMismatch> mismatches;
    std::size_t pump_mismatches = 0;     ///< same m, ket or bra moved by one level-2 atom
    std::size_t diagonal_mismatches = 0; ///< row == column
    std::size_t other_mismatches = 0;
    /// Pump mismatches are all exact sign flips, i.e. the forms agree after
    /// rho_{l,m,r} -> (-1)^{l+r} rho_{l,m,r}.
    bool pump_sign_convention_only = false;
    double literal_trace_defect = 0.0;
    double derived_trace_defect = 0.0;
    std::string verdict;

    bool empty() const noexcept { return mismatches.empty(); }
};

CoefficientDiff diff_generator_forms(int N, double c, double p);

struct StationaryOptions {
    numerics::NullSpaceOptions null_space;
};

struct StationarySolution {
    DensityMatrix rho;
    double residual = 0.0;
    double condition_estimate = 0.0;
};

/// Null vector of the generator at unit trace. p = 0 short-circuits to |0><0|.
StationarySolution solve_stationary(const Generator& generator, const StationaryOptions& options = {});

struct Observables {
    double S00 = 0.0;
    double S11 = 0.0;
    double S22 = 0.0;
    double var00 = 0.0;
    double var11 = 0.0;
    double var22 = 0.0;

    double total() const noexcept { return S00 + S11 + S22; }
};

Observables observables(const DensityMatrix& rho);

struct OracleOptions {
    double horizon = 400.0;          ///< in units of 1/gamma_b
    double derivative_tol = 1e-10;   ///< steady-state certificate on ||d rho/dt||_inf
    double rtol = 1e-10;
    double atol = 1e-14;
    bool stop_when_relaxed = true;
};

struct OracleResult {
    DensityMatrix rho;
    double t_reached = 0.0;
    double derivative_norm = 0.0;
    double max_trace_drift = 0.0;
    /// Largest coherence between different level-1 occupations at the end.
    double max_leakage = 0.0;
    std::size_t steps = 0;
};

/**
 * Integrates the full master equation on the symmetric Hilbert space (all
 * coherences, not only the ansatz) with dense density matrices and sparse
 * collective operators, then projects onto the ansatz. Shares no code with
 * the generator assembly beyond the single-operator matrix elements.
 */
OracleResult evolve_oracle(int N, double c, double p, const DensityMatrix& rho0,
                           const OracleOptions& options = {});

struct SweepRow {
    double p = 0.0;
    Observables quantum;
    std::optional<SemiclassicalSteady> semiclassical; ///< only for p in [0, 1]
    Occupations perturbative;
};

/// One stationary solve per pump value; rows are computed on up to `threads`
/// workers and returned in grid order.
std::vector<SweepRow> sweep_pump(int N, double c, std::span<const double> p_grid, unsigned threads = 1);

struct HalfRise {
    double p_star = 0.0;  ///< smallest p with <S22>(p) = S22_peak / 2
    double p_peak = 0.0;
    double S22_peak = 0.0;
};

/// Locates the maximum of <S22>(p) on [0, 1] and the half-rise point below it.
HalfRise half_rise_pump(int N, double c, double tol = 1e-7);

} // namespace superlase
