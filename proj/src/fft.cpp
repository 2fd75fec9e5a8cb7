#include "parapde/errors.hpp"
#include "parapde/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace parapde {
namespace {

// The FFTW planner is not thread-safe; execution through fftw_execute_dft is.
class PlanCache {
public:
    fftw_plan get(int dim, int n, int sign) {
        std::lock_guard<std::mutex> lock(mu_);
        const auto key = std::make_tuple(dim, n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        int dims[3] = {n, n, n};
        std::size_t total = 1;
        for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(n);
        auto* in = fftw_alloc_complex(total);
        auto* out = fftw_alloc_complex(total);
        fftw_plan p = fftw_plan_dft(dim, dims, in, out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(in);
        fftw_free(out);
        plans_.emplace(key, p);
        return p;
    }

private:
    std::mutex mu_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

void run(int dim, int n, int sign, const cplx* in, cplx* out) {
    fftw_plan p = cache().get(dim, n, sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

std::size_t ipow(int n, int d) {
    std::size_t s = 1;
    for (int a = 0; a < d; ++a) s *= static_cast<std::size_t>(n);
    return s;
}

void symmetrize(SpectralField& f) {
    const auto& g = f.grid();
    auto& c = f.coeffs();
    for (std::size_t i = 0; i < c.size(); ++i) {
        const std::size_t j = g.neg(i);
        if (j < i) continue;
        if (j == i) {
            c[i] = cplx(c[i].real(), 0.0);
            continue;
        }
        const cplx a = 0.5 * (c[i] + std::conj(c[j]));
        c[i] = a;
        c[j] = std::conj(a);
    }
}

// Index on an n-grid of the lattice mode with flat index f on g.
std::size_t embed(const TorusGrid& g, std::size_t f, int n) {
    const auto k = g.mode(f);
    std::size_t out = 0;
    for (int a = 0; a < g.dim(); ++a) out = out * n + static_cast<std::size_t>(k[a] >= 0 ? k[a] : k[a] + n);
    return out;
}

}  // namespace

SpectralField forward_complex(const TorusGrid& g, std::span<const cplx> values, bool real) {
    if (values.size() != g.size()) throw StructuralError("forward: sample count does not match grid");
    std::vector<cplx> out(g.size());
    run(g.dim(), g.modes(), FFTW_FORWARD, values.data(), out.data());
    const double s = std::pow(kTwoPi, 0.5 * g.dim()) / double(g.size());
    for (auto& v : out) v *= s;
    SpectralField f(g, std::move(out), real);
    if (real) symmetrize(f);
    return f;
}

SpectralField forward(const TorusGrid& g, std::span<const double> values) {
    if (values.size() != g.size()) throw StructuralError("forward: sample count does not match grid");
    std::vector<cplx> buf(values.begin(), values.end());
    return forward_complex(g, buf, true);
}

std::vector<cplx> inverse_complex(const SpectralField& f) {
    const auto& g = f.grid();
    std::vector<cplx> out(g.size());
    run(g.dim(), g.modes(), FFTW_BACKWARD, f.coeffs().data(), out.data());
    const double s = std::pow(kTwoPi, -0.5 * g.dim());
    for (auto& v : out) v *= s;
    return out;
}

std::vector<double> inverse(const SpectralField& f) {
    const auto c = inverse_complex(f);
    std::vector<double> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i].real();
    return out;
}

std::vector<cplx> to_padded(const SpectralField& f, int P) {
    const auto& g = f.grid();
    if (P < g.modes() || P % 2 != 0) throw StructuralError("padded size must be even and at least M");
    if (P == g.modes()) return inverse_complex(f);
    std::vector<cplx> buf(ipow(P, g.dim()));
    const auto& c = f.coeffs();
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i] != 0.0) buf[embed(g, i, P)] = c[i];
    std::vector<cplx> out(buf.size());
    run(g.dim(), P, FFTW_BACKWARD, buf.data(), out.data());
    const double s = std::pow(kTwoPi, -0.5 * g.dim());
    for (auto& v : out) v *= s;
    return out;
}

SpectralField from_padded(const TorusGrid& target, std::span<const cplx> values, int P, bool real) {
    if (values.size() != ipow(P, target.dim())) throw StructuralError("padded sample count mismatch");
    if (P == target.modes()) return forward_complex(target, values, real);
    if (P < target.modes()) throw StructuralError("padded size smaller than target grid");
    std::vector<cplx> spec(values.size());
    run(target.dim(), P, FFTW_FORWARD, values.data(), spec.data());
    const double s = std::pow(kTwoPi, 0.5 * target.dim()) / double(values.size());
    std::vector<cplx> out(target.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        if (!target.nyquist(i)) out[i] = s * spec[embed(target, i, P)];
    SpectralField f(target, std::move(out), real);
    if (real) symmetrize(f);
    return f;
}

double value_at(const SpectralField& f, std::array<double, 3> x) {
    const auto& g = f.grid();
    cplx acc = 0.0;
    const auto& c = f.coeffs();
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0.0) continue;
        double ph = 0.0;
        for (int a = 0; a < g.dim(); ++a) ph += g.kcomp(a, i) * x[a];
        acc += c[i] * cplx(std::cos(ph), std::sin(ph));
    }
    return acc.real() * std::pow(kTwoPi, -0.5 * g.dim());
}

}  // namespace parapde
