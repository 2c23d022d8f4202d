#pragma once

#include <cstddef>

namespace cokinetic::kernels {

enum class Isa { Scalar, Avx2 };

// out[v] = sum_k alpha[k] * cos_rows[k][v] + beta[k] * sin_rows[k][v]
using RowCombineFn = void (*)(int nterms, const double* alpha, const double* beta, const double* const* cos_rows,
                              const double* const* sin_rows, int len, double* out);

// Running min/max over data[0..len); lo/hi are updated in place.
using MinMaxFn = void (*)(const double* data, std::size_t len, double* lo, double* hi);

void row_combine_scalar(int nterms, const double* alpha, const double* beta, const double* const* cos_rows,
                        const double* const* sin_rows, int len, double* out);
void minmax_scalar(const double* data, std::size_t len, double* lo, double* hi);

#if defined(__x86_64__) || defined(_M_X64)
void row_combine_avx2(int nterms, const double* alpha, const double* beta, const double* const* cos_rows,
                      const double* const* sin_rows, int len, double* out);
void minmax_avx2(const double* data, std::size_t len, double* lo, double* hi);
#endif

bool cpu_has_avx2();

// Kernel set picked once from the CPU; COKINETIC_ISA=scalar forces the reference path.
Isa active_isa();
const char* isa_name(Isa isa);
RowCombineFn row_combine(Isa isa);
MinMaxFn minmax(Isa isa);

}  // namespace cokinetic::kernels
