#pragma once

#include "parapde/spectral.hpp"

#include <cmath>
#include <random>

namespace testutil {

using parapde::cplx;

// Random real field with Hermitian coefficients supported on |k|_∞ ≤ band.
inline parapde::SpectralField random_field(const parapde::TorusGrid& g, int band, std::mt19937_64& rng,
                                           double decay = 0.0) {
    std::normal_distribution<double> n01;
    parapde::SpectralField f(g);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const std::size_t j = g.neg(i);
        if (j < i || g.nyquist(i) || g.kinf(i) > band) continue;
        const double amp = std::pow(1.0 + g.k2(i), -0.5 * decay);
        if (j == i) {
            f[i] = amp * n01(rng);
        } else {
            f[i] = amp * cplx(n01(rng), n01(rng));
            f[j] = std::conj(f[i]);
        }
    }
    return f;
}

// O(M^{2d}) convolution (2π)^{−d/2} Σ_ℓ f̂(k−ℓ)ĝ(ℓ) restricted to the grid band.
inline parapde::SpectralField brute_product(const parapde::SpectralField& f, const parapde::SpectralField& g) {
    const auto& grid = f.grid();
    parapde::SpectralField out(grid);
    const int B = grid.max_mode();
    const double c = std::pow(parapde::kTwoPi, -0.5 * grid.dim());
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (grid.nyquist(k)) continue;
        const auto kk = grid.mode(k);
        cplx acc = 0.0;
        for (std::size_t l = 0; l < out.size(); ++l) {
            if (grid.nyquist(l)) continue;
            const auto ll = grid.mode(l);
            std::array<int, 3> d{0, 0, 0};
            bool inside = true;
            for (int a = 0; a < grid.dim(); ++a) {
                d[a] = kk[a] - ll[a];
                if (std::abs(d[a]) > B) inside = false;
            }
            if (inside) acc += f.at(d) * g[l];
        }
        out[k] = c * acc;
    }
    return out;
}

inline double max_abs_diff(const parapde::SpectralField& a, const parapde::SpectralField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs(const parapde::SpectralField& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i]));
    return m;
}

}  // namespace testutil
