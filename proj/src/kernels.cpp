#include "cokinetic/kernels.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>

namespace cokinetic::kernels {

void row_combine_scalar(int nterms, const double* alpha, const double* beta, const double* const* cos_rows,
                        const double* const* sin_rows, int len, double* out) {
    for (int v = 0; v < len; ++v) out[v] = 0.0;
    for (int k = 0; k < nterms; ++k) {
        const double a = alpha[k], b = beta[k];
        const double* c = cos_rows[k];
        const double* s = sin_rows[k];
        for (int v = 0; v < len; ++v) out[v] += a * c[v] + b * s[v];
    }
}

void minmax_scalar(const double* data, std::size_t len, double* lo, double* hi) {
    double l = *lo, h = *hi;
    for (std::size_t i = 0; i < len; ++i) {
        l = std::min(l, data[i]);
        h = std::max(h, data[i]);
    }
    *lo = l;
    *hi = h;
}

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(_M_X64)) && defined(__GNUC__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa active_isa() {
    static const Isa isa = [] {
        const char* env = std::getenv("COKINETIC_ISA");
        if (env && std::strcmp(env, "scalar") == 0) return Isa::Scalar;
        return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
    }();
    return isa;
}

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

RowCombineFn row_combine(Isa isa) {
#if defined(__x86_64__) || defined(_M_X64)
    if (isa == Isa::Avx2) return row_combine_avx2;
#endif
    (void)isa;
    return row_combine_scalar;
}

MinMaxFn minmax(Isa isa) {
#if defined(__x86_64__) || defined(_M_X64)
    if (isa == Isa::Avx2) return minmax_avx2;
#endif
    (void)isa;
    return minmax_scalar;
}

}  // namespace cokinetic::kernels
