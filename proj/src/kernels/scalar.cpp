#include <algorithm>
#include <cmath>

#include "kernels_impl.hpp"

namespace superlase::kernels::detail {

namespace {

void csr_matvec(const CsrView& a, const double* x, double* y)
{
    for (std::size_t i = 0; i < a.rows; ++i) {
        double acc = 0.0;
        for (std::int32_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
            acc += a.values[k] * x[a.col_idx[k]];
        }
        y[i] = acc;
    }
}

void combine(std::size_t n, const double* base, double h, std::size_t k, const double* const* stages,
             const double* weights, double* out)
{
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            if (weights[j] != 0.0) {
                acc += weights[j] * stages[j][i];
            }
        }
        out[i] = base[i] + h * acc;
    }
}

double error_norm(std::size_t n, const double* err, const double* y0, const double* y1, double atol,
                  double rtol)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double scale = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        worst = std::max(worst, std::abs(err[i]) / scale);
    }
    return worst;
}

double max_abs(std::size_t n, const double* x)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        worst = std::max(worst, std::abs(x[i]));
    }
    return worst;
}

double dot_diff(std::size_t n, const double* a, const double* x, const double* b, const double* y)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += a[i] * x[i] - b[i] * y[i];
    }
    return acc;
}

void resonance_sum(std::size_t nk, const double* coef_re, const double* coef_im, const double* centers,
                   double d, std::size_t nw, const double* omega, double* out_re, double* out_im)
{
    const double d2 = d * d;
    for (std::size_t j = 0; j < nw; ++j) {
        double re = 0.0;
        double im = 0.0;
        for (std::size_t k = 0; k < nk; ++k) {
            const double xp = centers[k] + omega[j];
            const double xm = centers[k] - omega[j];
            const double ip = 1.0 / (d2 + xp * xp);
            const double im_ = 1.0 / (d2 + xm * xm);
            // C/(d + ix) = C (d - ix) / (d^2 + x^2)
            re += (coef_re[k] * d + coef_im[k] * xp) * ip + (coef_re[k] * d + coef_im[k] * xm) * im_;
            im += (coef_im[k] * d - coef_re[k] * xp) * ip + (coef_im[k] * d - coef_re[k] * xm) * im_;
        }
        out_re[j] = re;
        out_im[j] = im;
    }
}

} // namespace

const KernelTable kScalarTable{
    "scalar", csr_matvec, combine, error_norm, max_abs, dot_diff, resonance_sum,
};

} // namespace superlase::kernels::detail
