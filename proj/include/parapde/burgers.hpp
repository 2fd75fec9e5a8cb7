#pragma once

#include "parapde/gaussian.hpp"
#include "parapde/spectral.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace parapde {

// Galerkin stochastic Burgers on 𝕋¹:
// dv(k) = −k²v(k)dt + b_k(v)dt + ik dβ(k), |k| ≤ N, with E|β_t(k)|² = t.
struct GalerkinConfig {
    int N = 16;
    // Grid size; 0 means the smallest grid holding |k| ≤ N. Larger grids track the modes
    // above N, which then evolve as pure OU.
    int modes = 0;
    bool nonlinear = true;
    bool noise = true;
};

struct GalerkinState {
    int N = 16;
    SpectralField v;
    double time = 0.0;
    Rng rng{0};
    bool nonlinear = true;
    bool noise = true;
};

TorusGrid galerkin_grid(const GalerkinConfig& c);
// v(0) = 0, or v(k) ~ 𝒩_ℂ(0, 1/2) (white noise) when stationary.
GalerkinState galerkin_init(const GalerkinConfig& c, std::uint64_t seed, std::uint64_t replica, bool stationary);

// b_k(v) = ik Σ_{ℓ+m=k} 1_{|ℓ|,|m|,|k|≤N} v(ℓ)v(m) in the (2π)^{−1/2} convolution convention.
SpectralField burgers_drift(const SpectralField& v, int N);
// Σ_{|k|≤N} v(−k) b_k(v)
cplx drift_pairing(const SpectralField& v, const SpectralField& b, int N);
// A = Σ |v(k)|², and its dissipation rate −2Σ k²|v(k)|².
double energy(const SpectralField& v);
double dissipation(const SpectralField& v);

// Exponential Euler with exact OU part: v ← e^{−k²dt}v + φ₁ b(v) + G.
void galerkin_step(GalerkinState& s, double dt);
// Same with a supplied integrator and noise increment G (used for matched-noise runs).
void galerkin_step(GalerkinState& s, const ExpIntegrator& integ, const SpectralField* increment);
GalerkinState galerkin_evolve(GalerkinState s, double dt, double t_final);

// Exact OU increment of the Burgers noise over dt: E|G_k|² = (1 − e^{−2k²dt})/2.
SpectralField burgers_increment(const TorusGrid& g, Rng& rng, double dt);
// Combine consecutive increments over dt into one over n·dt: G = Σ_j e^{−k²(n−1−j)dt} G_j.
SpectralField aggregate_increments(const std::vector<SpectralField>& fine, double dt);

// Running integral 𝒩_t(e_k) = ∫_0^t b_k(v_s) ds by the trapezoidal rule.
class DriftAccumulator {
public:
    explicit DriftAccumulator(const TorusGrid& g) : value_(g) {}
    // Add the drift at the next grid time; the first call only records the start.
    void push(const SpectralField& b, double dt);
    const SpectralField& value() const { return value_; }
    double time() const { return time_; }
    std::size_t samples() const { return n_; }

private:
    SpectralField value_;
    std::optional<SpectralField> last_;
    double time_ = 0.0;
    std::size_t n_ = 0;
};

// Cumulative trapezoidal integrals of b(v) along a path on a uniform grid.
FieldPath accumulate_drift(const FieldPath& path, int N, double dt);

// F(ρ)(e_k) = −ik Σ_{ℓ+m=k, |ℓ|,|m|≤cutoff} H_{ℓ,m}(ρ)/(ℓ²+m²), H_{ℓ,m} = ρ(e_ℓ)ρ(e_m) − δ_{ℓ+m=0}/2.
cplx ito_aux_F(const SpectralField& rho, int k, int cutoff);
// E|F(η)(e_k)|² for white noise η with E|η(e_ℓ)|² = 1/2: (k²/2) Σ_ℓ (ℓ² + (k−ℓ)²)^{−2}.
double ito_aux_F_second_moment(int k, int cutoff);

}  // namespace parapde
