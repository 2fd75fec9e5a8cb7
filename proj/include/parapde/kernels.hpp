#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace parapde::kernels {

using cplx = std::complex<double>;

// out[i] = m[i] * in[i]
using ScaleFn = void (*)(cplx* out, const cplx* in, const double* m, std::size_t n);
// out[i] = a[i] * b[i]
using MulFn = void (*)(cplx* out, const cplx* a, const cplx* b, std::size_t n);
// out[i] += a[i] * b[i]
using MulAccFn = void (*)(cplx* out, const cplx* a, const cplx* b, std::size_t n);
// out[i] = e[i] * state[i] + phi[i] * src[i]
using ExpUpdateFn = void (*)(cplx* out, const cplx* state, const cplx* src, const double* e,
                             const double* phi, std::size_t n);
// out[i] += s * in[i]
using AxpyFn = void (*)(cplx* out, double s, const cplx* in, std::size_t n);

struct KernelTable {
    std::string_view name;
    ScaleFn scale;
    MulFn mul;
    MulAccFn mul_acc;
    ExpUpdateFn exp_update;
    AxpyFn axpy;
};

const KernelTable& scalar_table();
// Null when the build or the CPU lacks AVX2.
const KernelTable* avx2_table();

// Chosen once: AVX2 when available unless PARAPDE_SIMD=scalar.
const KernelTable& active();

}  // namespace parapde::kernels
