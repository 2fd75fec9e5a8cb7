#include "parapde/kernels.hpp"

#include <immintrin.h>

namespace parapde::kernels {
namespace {

// No FMA anywhere: results must match the scalar table bit for bit.

// Two complex values per register; m[i] duplicated into both lanes of its pair.
inline __m256d dup_pair(const double* m) {
    const __m128d two = _mm_loadu_pd(m);
    return _mm256_permute4x64_pd(_mm256_castpd128_pd256(two), 0b01010000);
}

void scale(cplx* out, const cplx* in, const double* m, std::size_t n) {
    auto* o = reinterpret_cast<double*>(out);
    auto* x = reinterpret_cast<const double*>(in);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d v = _mm256_loadu_pd(x + 2 * i);
        _mm256_storeu_pd(o + 2 * i, _mm256_mul_pd(dup_pair(m + i), v));
    }
    for (; i < n; ++i) {
        o[2 * i] = m[i] * x[2 * i];
        o[2 * i + 1] = m[i] * x[2 * i + 1];
    }
}

// (ar*br - ai*bi, ar*bi + ai*br) for two packed complex numbers.
inline __m256d cmul2(__m256d a, __m256d b) {
    const __m256d ar = _mm256_movedup_pd(a);        // ar ar
    const __m256d ai = _mm256_permute_pd(a, 0xF);   // ai ai
    const __m256d bs = _mm256_permute_pd(b, 0x5);   // bi br
    const __m256d p = _mm256_mul_pd(ar, b);         // ar*br ar*bi
    const __m256d q = _mm256_mul_pd(ai, bs);        // ai*bi ai*br
    return _mm256_addsub_pd(p, q);
}

void mul(cplx* out, const cplx* a, const cplx* b, std::size_t n) {
    auto* o = reinterpret_cast<double*>(out);
    auto* x = reinterpret_cast<const double*>(a);
    auto* y = reinterpret_cast<const double*>(b);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        _mm256_storeu_pd(o + 2 * i, cmul2(_mm256_loadu_pd(x + 2 * i), _mm256_loadu_pd(y + 2 * i)));
    for (; i < n; ++i) {
        const double ar = x[2 * i], ai = x[2 * i + 1];
        const double br = y[2 * i], bi = y[2 * i + 1];
        o[2 * i] = ar * br - ai * bi;
        o[2 * i + 1] = ar * bi + ai * br;
    }
}

void mul_acc(cplx* out, const cplx* a, const cplx* b, std::size_t n) {
    auto* o = reinterpret_cast<double*>(out);
    auto* x = reinterpret_cast<const double*>(a);
    auto* y = reinterpret_cast<const double*>(b);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d p = cmul2(_mm256_loadu_pd(x + 2 * i), _mm256_loadu_pd(y + 2 * i));
        _mm256_storeu_pd(o + 2 * i, _mm256_add_pd(_mm256_loadu_pd(o + 2 * i), p));
    }
    for (; i < n; ++i) {
        const double ar = x[2 * i], ai = x[2 * i + 1];
        const double br = y[2 * i], bi = y[2 * i + 1];
        o[2 * i] += ar * br - ai * bi;
        o[2 * i + 1] += ar * bi + ai * br;
    }
}

void exp_update(cplx* out, const cplx* state, const cplx* src, const double* e, const double* phi,
                std::size_t n) {
    auto* o = reinterpret_cast<double*>(out);
    auto* s = reinterpret_cast<const double*>(state);
    auto* f = reinterpret_cast<const double*>(src);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d a = _mm256_mul_pd(dup_pair(e + i), _mm256_loadu_pd(s + 2 * i));
        const __m256d b = _mm256_mul_pd(dup_pair(phi + i), _mm256_loadu_pd(f + 2 * i));
        _mm256_storeu_pd(o + 2 * i, _mm256_add_pd(a, b));
    }
    for (; i < n; ++i) {
        o[2 * i] = e[i] * s[2 * i] + phi[i] * f[2 * i];
        o[2 * i + 1] = e[i] * s[2 * i + 1] + phi[i] * f[2 * i + 1];
    }
}

void axpy(cplx* out, double s, const cplx* in, std::size_t n) {
    auto* o = reinterpret_cast<double*>(out);
    auto* x = reinterpret_cast<const double*>(in);
    const __m256d sv = _mm256_set1_pd(s);
    const std::size_t m = 2 * n;
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4)
        _mm256_storeu_pd(o + i, _mm256_add_pd(_mm256_loadu_pd(o + i),
                                              _mm256_mul_pd(sv, _mm256_loadu_pd(x + i))));
    for (; i < m; ++i) o[i] += s * x[i];
}

}  // namespace

const KernelTable* avx2_table() {
    static const KernelTable t{"avx2", scale, mul, mul_acc, exp_update, axpy};
    if (!__builtin_cpu_supports("avx2")) return nullptr;
    return &t;
}

}  // namespace parapde::kernels
