#pragma once

#include "parapde/besov.hpp"
#include "parapde/gaussian.hpp"
#include "parapde/spectral.hpp"

namespace parapde {

// A truncated lattice sum: value over |k|_∞ ≤ K and a bound on the omitted tail.
struct SumResult {
    double value = 0.0;
    double tail_bound = 0.0;
    int K = 0;
    int d = 0;
};

// Σ_{|k|_∞ > K, k ∈ ℤ^d} e^{−t|k|²} ≤ this (d ∈ {1,2,3}).
double gaussian_lattice_tail(double t, int K, int d);

// g_t = (2π)^{−2} Σ_{k∈ℤ²} e^{−t|k|²}
SumResult heat_trace_gt(double t, int K);
// Cutoff making the tail bound of g_t negligible (< 1e−16 relative).
int heat_trace_cutoff(double t);

// ∫_δ^T g_s ds by Gauss–Kronrod in log s.
double integrated_heat_trace(double delta, double T);

// f_n(t) = v (2π)^{−2} [Σ_{k≠0} |ℱφ(k/n)|²/|k|² (1 − e^{−t|k|²}) + t], v the per-mode noise variance.
SumResult pam_counterterm_fn(double t, int n, int K, const Mollifier& m = gaussian_mollifier(),
                             double variance = 1.0);
int counterterm_cutoff(int n);

struct SigmaResult {
    bool finite = false;
    double value = 0.0;
    double error = 0.0;
};
// σ² = (2π)^{−d/2} ∫ R(k)/|k|² dk; divergent for β ≤ 2.
SigmaResult sigma_sq_limit(const RadialProfile& rtilde, double beta, int d);

// σ²_ε(t) = (2π)^{−d/2} ε^{d−2α} Σ_{m≠0} (1 − e^{−t|m|²})²/|m|² R(εm)
SumResult sigma_sq_eps(double t, const PotentialParams& p, int d, int K);

// E|Δ_i V_ε(x)|² = (2π)^{−d/2} ε^{d−2α} Σ_{m≠0} ρ_i(m)² R(εm)
double potential_block_variance(int i, const PotentialParams& p, int d);
// E[Δ_i V_ε(x) Δ_j V_ε(x)]
double potential_block_covariance(int i, int j, const PotentialParams& p, int d);

// (1/2) Σ_{ℓ+m=k, |ℓ|,|m|≤N} (1 − e^{−2ℓ²t})(1 − e^{−2m²t})
double ou_square_variance_partial(int k, double t, int N);

// Σ_{ℓ+m=k} 1/(ℓ²+m²) truncated to |ℓ|,|m| ≤ N
double resonance_sum(int k, int N);

// ε^{4−4α} min(σ⁴, (ε2^q)^{β−2} ‖R̃‖_∞ σ²)
double gradient_square_variance_bound(int q, const PotentialParams& p, int d);

// Spectral coefficients of X^ε(t) with ℒX^ε = V_ε, X^ε(0) = 0.
SpectralField potential_heat_integral(const SpectralField& V, double t);
// |∇X|² on the grid band, exact product.
SpectralField gradient_square(const SpectralField& X);
// Exact Var[Δ_q(|∇X^ε|²)(t,x)] from Wick's theorem, evaluated by FFT convolution on grid g.
double gradient_square_block_variance(int q, double t, const PotentialParams& p, const TorusGrid& g);

}  // namespace parapde
