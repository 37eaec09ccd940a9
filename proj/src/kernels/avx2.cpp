// Compiled with -mavx2 -mfma; only reached after a CPUID check.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "kernels_impl.hpp"

namespace superlase::kernels::detail {

namespace {

inline double hsum(__m256d v)
{
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v)
{
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d m = _mm_max_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

inline __m256d vabs(__m256d v)
{
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

void csr_matvec(const CsrView& a, const double* x, double* y)
{
    for (std::size_t i = 0; i < a.rows; ++i) {
        std::int32_t k = a.row_ptr[i];
        const std::int32_t end = a.row_ptr[i + 1];
        __m256d acc = _mm256_setzero_pd();
        for (; k + 4 <= end; k += 4) {
            const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(a.col_idx + k));
            const __m256d xv = _mm256_i32gather_pd(x, idx, 8);
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(a.values + k), xv, acc);
        }
        double tail = 0.0;
        for (; k < end; ++k) {
            tail += a.values[k] * x[a.col_idx[k]];
        }
        y[i] = hsum(acc) + tail;
    }
}

void combine(std::size_t n, const double* base, double h, std::size_t k, const double* const* stages,
             const double* weights, double* out)
{
    const __m256d hv = _mm256_set1_pd(h);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t j = 0; j < k; ++j) {
            if (weights[j] != 0.0) {
                acc = _mm256_fmadd_pd(_mm256_set1_pd(weights[j]), _mm256_loadu_pd(stages[j] + i), acc);
            }
        }
        _mm256_storeu_pd(out + i, _mm256_fmadd_pd(hv, acc, _mm256_loadu_pd(base + i)));
    }
    for (; i < n; ++i) {
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
    const __m256d at = _mm256_set1_pd(atol);
    const __m256d rt = _mm256_set1_pd(rtol);
    __m256d worst = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d big = _mm256_max_pd(vabs(_mm256_loadu_pd(y0 + i)), vabs(_mm256_loadu_pd(y1 + i)));
        const __m256d scale = _mm256_fmadd_pd(rt, big, at);
        worst = _mm256_max_pd(worst, _mm256_div_pd(vabs(_mm256_loadu_pd(err + i)), scale));
    }
    double w = hmax(worst);
    for (; i < n; ++i) {
        const double scale = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        w = std::max(w, std::abs(err[i]) / scale);
    }
    return w;
}

double max_abs(std::size_t n, const double* x)
{
    __m256d worst = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        worst = _mm256_max_pd(worst, vabs(_mm256_loadu_pd(x + i)));
    }
    double w = hmax(worst);
    for (; i < n; ++i) {
        w = std::max(w, std::abs(x[i]));
    }
    return w;
}

double dot_diff(std::size_t n, const double* a, const double* x, const double* b, const double* y)
{
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(x + i), acc);
        acc = _mm256_fnmadd_pd(_mm256_loadu_pd(b + i), _mm256_loadu_pd(y + i), acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        tail += a[i] * x[i] - b[i] * y[i];
    }
    return hsum(acc) + tail;
}

void resonance_sum(std::size_t nk, const double* coef_re, const double* coef_im, const double* centers,
                   double d, std::size_t nw, const double* omega, double* out_re, double* out_im)
{
    const __m256d dv = _mm256_set1_pd(d);
    const __m256d d2 = _mm256_set1_pd(d * d);
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t j = 0;
    for (; j + 4 <= nw; j += 4) {
        const __m256d w = _mm256_loadu_pd(omega + j);
        __m256d re = _mm256_setzero_pd();
        __m256d im = _mm256_setzero_pd();
        for (std::size_t k = 0; k < nk; ++k) {
            const __m256d K = _mm256_set1_pd(centers[k]);
            const __m256d cr = _mm256_set1_pd(coef_re[k]);
            const __m256d ci = _mm256_set1_pd(coef_im[k]);
            const __m256d xp = _mm256_add_pd(K, w);
            const __m256d xm = _mm256_sub_pd(K, w);
            const __m256d ip = _mm256_div_pd(one, _mm256_fmadd_pd(xp, xp, d2));
            const __m256d iq = _mm256_div_pd(one, _mm256_fmadd_pd(xm, xm, d2));
            const __m256d crd = _mm256_mul_pd(cr, dv);
            const __m256d cid = _mm256_mul_pd(ci, dv);
            re = _mm256_fmadd_pd(_mm256_fmadd_pd(ci, xp, crd), ip, re);
            re = _mm256_fmadd_pd(_mm256_fmadd_pd(ci, xm, crd), iq, re);
            im = _mm256_fmadd_pd(_mm256_fnmadd_pd(cr, xp, cid), ip, im);
            im = _mm256_fmadd_pd(_mm256_fnmadd_pd(cr, xm, cid), iq, im);
        }
        _mm256_storeu_pd(out_re + j, re);
        _mm256_storeu_pd(out_im + j, im);
    }
    if (j < nw) {
        kScalarTable.resonance_sum(nk, coef_re, coef_im, centers, d, nw - j, omega + j, out_re + j,
                                   out_im + j);
    }
}

} // namespace

const KernelTable kAvx2Table{
    "avx2", csr_matvec, combine, error_norm, max_abs, dot_diff, resonance_sum,
};

} // namespace superlase::kernels::detail
