// Built with -mavx2 -mfma; only reached after the runtime CPU check.
#include <immintrin.h>

#include <algorithm>

#include "cokinetic/kernels.hpp"

namespace cokinetic::kernels {

void row_combine_avx2(int nterms, const double* alpha, const double* beta, const double* const* cos_rows,
                      const double* const* sin_rows, int len, double* out) {
    int v = 0;
    for (; v + 8 <= len; v += 8) {
        __m256d acc0 = _mm256_setzero_pd();
        __m256d acc1 = _mm256_setzero_pd();
        for (int k = 0; k < nterms; ++k) {
            const __m256d a = _mm256_broadcast_sd(alpha + k);
            const __m256d b = _mm256_broadcast_sd(beta + k);
            const double* c = cos_rows[k] + v;
            const double* s = sin_rows[k] + v;
            acc0 = _mm256_fmadd_pd(a, _mm256_loadu_pd(c), acc0);
            acc1 = _mm256_fmadd_pd(a, _mm256_loadu_pd(c + 4), acc1);
            acc0 = _mm256_fmadd_pd(b, _mm256_loadu_pd(s), acc0);
            acc1 = _mm256_fmadd_pd(b, _mm256_loadu_pd(s + 4), acc1);
        }
        _mm256_storeu_pd(out + v, acc0);
        _mm256_storeu_pd(out + v + 4, acc1);
    }
    for (; v < len; ++v) {
        double acc = 0.0;
        for (int k = 0; k < nterms; ++k) acc += alpha[k] * cos_rows[k][v] + beta[k] * sin_rows[k][v];
        out[v] = acc;
    }
}

void minmax_avx2(const double* data, std::size_t len, double* lo, double* hi) {
    std::size_t i = 0;
    __m256d vlo = _mm256_set1_pd(*lo);
    __m256d vhi = _mm256_set1_pd(*hi);
    for (; i + 4 <= len; i += 4) {
        const __m256d x = _mm256_loadu_pd(data + i);
        vlo = _mm256_min_pd(vlo, x);
        vhi = _mm256_max_pd(vhi, x);
    }
    alignas(32) double l[4], h[4];
    _mm256_store_pd(l, vlo);
    _mm256_store_pd(h, vhi);
    double rl = std::min(std::min(l[0], l[1]), std::min(l[2], l[3]));
    double rh = std::max(std::max(h[0], h[1]), std::max(h[2], h[3]));
    for (; i < len; ++i) {
        rl = std::min(rl, data[i]);
        rh = std::max(rh, data[i]);
    }
    *lo = rl;
    *hi = rh;
}

}  // namespace cokinetic::kernels
