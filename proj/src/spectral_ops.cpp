#include "parapde/errors.hpp"
#include "parapde/kernels.hpp"
#include "parapde/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace parapde {
namespace {

bool smooth_size(int n) {
    for (int p : {2, 3, 5})
        while (n % p == 0) n /= p;
    return n == 1;
}

std::vector<double> decay_table(const TorusGrid& g, double t) {
    const auto& k2 = g.k2_table();
    std::vector<double> e(k2.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::exp(-k2[i] * t);
    return e;
}

}  // namespace

SpectralField constant_field(const TorusGrid& g, double c) {
    SpectralField f(g);
    f[0] = c * std::pow(kTwoPi, 0.5 * g.dim());
    return f;
}

SpectralField project_modes(const SpectralField& f, int N) {
    if (N < 0) throw ArgumentError("project_modes: N must be nonnegative");
    const auto& g = f.grid();
    SpectralField out = f;
    for (std::size_t i = 0; i < out.size(); ++i)
        if (g.kinf(i) > N) out[i] = 0.0;
    return out;
}

SpectralField derivative(const SpectralField& f, int axis) {
    const auto& g = f.grid();
    if (axis < 0 || axis >= g.dim()) throw StructuralError("derivative: axis out of range");
    SpectralField out(g, f.real());
    const auto& kc = g.kcomp_table(axis);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = cplx(-kc[i] * f[i].imag(), kc[i] * f[i].real());
    return out;
}

SpectralField heat_propagate(const SpectralField& f, double t) {
    if (!(t >= 0.0)) throw ArgumentError("heat_propagate: t must be nonnegative");
    const auto e = decay_table(f.grid(), t);
    SpectralField out(f.grid(), f.real());
    kernels::active().scale(out.coeffs().data(), f.coeffs().data(), e.data(), f.size());
    return out;
}

SpectralField duhamel_step(const SpectralField& state, const SpectralField& source, double dt) {
    if (!(dt > 0.0)) throw ArgumentError("duhamel_step: dt must be positive");
    require_same_grid(state, source, "duhamel_step");
    return ExpIntegrator(state.grid(), dt).step(state, source);
}

ExpIntegrator::ExpIntegrator(const TorusGrid& g, double dt) : dt_(dt) {
    if (!(dt > 0.0)) throw ArgumentError("time step must be positive");
    const auto& k2 = g.k2_table();
    e_.resize(k2.size());
    phi1_.resize(k2.size());
    phi2_.resize(k2.size());
    for (std::size_t i = 0; i < k2.size(); ++i) {
        const double z = k2[i] * dt;
        e_[i] = std::exp(-z);
        if (z == 0.0) {
            phi1_[i] = dt;
            phi2_[i] = 0.5 * dt;
        } else if (z < 1e-4) {
            phi1_[i] = dt * (1.0 - z / 2.0 + z * z / 6.0);
            phi2_[i] = dt * (0.5 - z / 6.0 + z * z / 24.0);
        } else {
            phi1_[i] = -std::expm1(-z) / k2[i];
            phi2_[i] = (z - 1.0 + std::exp(-z)) / (k2[i] * z);
        }
    }
}

SpectralField ExpIntegrator::step(const SpectralField& state, const SpectralField& source) const {
    require_same_grid(state, source, "exponential step");
    SpectralField out(state.grid(), state.real() && source.real());
    kernels::active().exp_update(out.coeffs().data(), state.coeffs().data(), source.coeffs().data(),
                                 e_.data(), phi1_.data(), state.size());
    return out;
}

SpectralField ExpIntegrator::step2(const SpectralField& state, const SpectralField& src0,
                                   const SpectralField& src1) const {
    SpectralField out = step(state, src0);
    SpectralField diff = src1 - src0;
    std::vector<cplx> corr(diff.size());
    kernels::active().scale(corr.data(), diff.coeffs().data(), phi2_.data(), diff.size());
    kernels::active().axpy(out.coeffs().data(), 1.0, corr.data(), corr.size());
    return out;
}

SpectralField ExpIntegrator::propagate(const SpectralField& f) const {
    SpectralField out(f.grid(), f.real());
    kernels::active().scale(out.coeffs().data(), f.coeffs().data(), e_.data(), f.size());
    return out;
}

int band_limit(const SpectralField& f, double tol) {
    const auto& g = f.grid();
    int b = -1;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (std::abs(f[i]) > tol) b = std::max(b, g.kinf(i));
    return b;
}

int required_padding(int bf, int bg, int retained) {
    // Images of the top product mode bf+bg land at bf+bg−P and must stay outside the retained band.
    int need = std::max(bf + bg + retained + 1, 2 * (std::max(bf, bg) + 1));
    return need + (need % 2);
}

SpectralField dealiased_product(const SpectralField& f, const SpectralField& g, int P) {
    require_same_grid(f, g, "dealiased_product");
    const auto& grid = f.grid();
    const int bf = band_limit(f), bg = band_limit(g);
    if (bf < 0 || bg < 0) return SpectralField(grid, f.real() && g.real());
    const int R = std::min(grid.max_mode(), bf + bg);
    const int need = required_padding(bf, bg, R);
    if (P < need || P < grid.modes())
        throw AliasingError("dealiased_product: padded size " + std::to_string(P) + " below required " +
                            std::to_string(std::max(need, grid.modes())));
    auto a = to_padded(f, P);
    const auto b = to_padded(g, P);
    kernels::active().mul(a.data(), a.data(), b.data(), a.size());
    return from_padded(grid, a, P, f.real() && g.real());
}

SpectralField dealiased_product(const SpectralField& f, const SpectralField& g) {
    require_same_grid(f, g, "dealiased_product");
    const auto& grid = f.grid();
    const int bf = band_limit(f), bg = band_limit(g);
    if (bf < 0 || bg < 0) return SpectralField(grid, f.real() && g.real());
    const int R = std::min(grid.max_mode(), bf + bg);
    int P = std::max(required_padding(bf, bg, R), grid.modes());
    while (!smooth_size(P)) P += 2;
    return dealiased_product(f, g, P);
}

double l2_norm(const SpectralField& f) {
    double s = 0.0;
    for (const auto& v : f.coeffs()) s += std::norm(v);
    return std::sqrt(s);
}

double sup_norm(const SpectralField& f) {
    const auto v = inverse_complex(f);
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, std::abs(f.real() ? cplx(x.real(), 0.0) : x));
    return m;
}

double mean_value(const SpectralField& f) {
    return f[0].real() * std::pow(kTwoPi, -0.5 * f.grid().dim());
}

double max_hermitian_defect(const SpectralField& f) {
    const auto& g = f.grid();
    double scale = 0.0, d = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        scale = std::max(scale, std::abs(f[i]));
        d = std::max(d, std::abs(f[i] - std::conj(f[g.neg(i)])));
    }
    return scale > 0.0 ? d / scale : 0.0;
}

}  // namespace parapde
