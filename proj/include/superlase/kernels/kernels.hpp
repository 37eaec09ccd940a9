#pragma once

// Data-parallel inner loops shared by the solvers. Every kernel has a scalar
// reference implementation and, on x86-64, an AVX2+FMA variant; the variant
// is picked once at runtime from CPUID. Set SUPERLASE_KERNELS=scalar to force
// the reference path.

#include <cstddef>
#include <cstdint>
#include <span>

namespace superlase::kernels {

/// Compressed sparse row view over externally owned arrays.
struct CsrView {
    std::size_t rows = 0;
    std::size_t cols = 0;
    const std::int32_t* row_ptr = nullptr; // rows + 1 entries
    const std::int32_t* col_idx = nullptr;
    const double* values = nullptr;
};

struct KernelTable {
    const char* name;

    /// y = A x
    void (*csr_matvec)(const CsrView& a, const double* x, double* y);

    /// out = base + h * sum_j weights[j] * stages[j]; stages with zero weight are skipped.
    void (*combine)(std::size_t n, const double* base, double h, std::size_t k,
                    const double* const* stages, const double* weights, double* out);

    /// max_i |err_i| / (atol + rtol * max(|y0_i|, |y1_i|))
    double (*error_norm)(std::size_t n, const double* err, const double* y0, const double* y1,
                         double atol, double rtol);

    double (*max_abs)(std::size_t n, const double* x);

    /// sum_i a_i x_i - b_i y_i
    double (*dot_diff)(std::size_t n, const double* a, const double* x, const double* b,
                       const double* y);

    /// For every omega_j:
    ///   sum_k C_k [ 1/(d + i(K_k + omega_j)) + 1/(d + i(K_k - omega_j)) ]
    void (*resonance_sum)(std::size_t nk, const double* coef_re, const double* coef_im,
                          const double* centers, double d, std::size_t nw, const double* omega,
                          double* out_re, double* out_im);
};

const KernelTable& scalar_table() noexcept;

/// nullptr when the build or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table() noexcept;

/// The table chosen for this process.
const KernelTable& active() noexcept;

// Convenience wrappers over active().

void csr_matvec(const CsrView& a, std::span<const double> x, std::span<double> y);

double max_abs(std::span<const double> x);

double dot_diff(std::span<const double> a, std::span<const double> x, std::span<const double> b,
                std::span<const double> y);

} // namespace superlase::kernels
