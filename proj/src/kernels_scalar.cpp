#include "parapde/kernels.hpp"

namespace parapde::kernels {
namespace {

// Written out by hand: std::complex operator* goes through __muldc3.
void scale(cplx* out, const cplx* in, const double* m, std::size_t n) {
    auto* o = reinterpret_cast<double*>(out);
    auto* x = reinterpret_cast<const double*>(in);
    for (std::size_t i = 0; i < n; ++i) {
        o[2 * i] = m[i] * x[2 * i];
        o[2 * i + 1] = m[i] * x[2 * i + 1];
    }
}

void mul(cplx* out, const cplx* a, const cplx* b, std::size_t n) {
    auto* o = reinterpret_cast<double*>(out);
    auto* x = reinterpret_cast<const double*>(a);
    auto* y = reinterpret_cast<const double*>(b);
    for (std::size_t i = 0; i < n; ++i) {
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
    for (std::size_t i = 0; i < n; ++i) {
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
    for (std::size_t i = 0; i < n; ++i) {
        o[2 * i] = e[i] * s[2 * i] + phi[i] * f[2 * i];
        o[2 * i + 1] = e[i] * s[2 * i + 1] + phi[i] * f[2 * i + 1];
    }
}

void axpy(cplx* out, double s, const cplx* in, std::size_t n) {
    auto* o = reinterpret_cast<double*>(out);
    auto* x = reinterpret_cast<const double*>(in);
    for (std::size_t i = 0; i < 2 * n; ++i) o[i] += s * x[i];
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable t{"scalar", scale, mul, mul_acc, exp_update, axpy};
    return t;
}

}  // namespace parapde::kernels
