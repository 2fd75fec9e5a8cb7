#pragma once

#include "parapde/besov.hpp"
#include "parapde/gaussian.hpp"
#include "parapde/spectral.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace parapde {

// Generalized parabolic Anderson model on 𝕋²: ℒu = F(u)ξ_n − F′(u)F(u) f_n(t).

struct PamEnhancement {
    int n = 4;
    double gamma = 0.75;
    double dt = 0.0;
    bool renormalized = true;
    SpectralField xi;             // ξ_n, unit-variance white noise mollified at level n
    FieldPath X;                  // ℒX = ξ_n, X(0) = 0, at t_i = i·dt
    FieldPath resonant;           // X(t_i)∘ξ_n − f_n(t_i)
    std::vector<double> counter;  // f_n(t_i) (zero when not renormalized)
    std::size_t steps() const { return X.empty() ? 0 : X.size() - 1; }
};

// f_n(t) summed over the grid band, which is E[(X(t)∘ξ_n)(x)] for the discrete model.
double pam_grid_counterterm(const TorusGrid& g, int n, double t, const Mollifier& m = gaussian_mollifier());

SpectralField pam_noise(const TorusGrid& g, int n, std::uint64_t seed, std::uint64_t replica,
                        const Mollifier& m = gaussian_mollifier());
// X(t) = ((1 − e^{−t|k|²})/|k|²) ξ̂(k), t at k = 0.
SpectralField pam_heat_integral(const SpectralField& xi, double t);

PamEnhancement build_pam_enhancement(const SpectralField& xi, int n, const DyadicPartition& part, double dt,
                                     double t_final, bool renormalized = true, double gamma = 0.75);
PamEnhancement build_pam_enhancement(std::uint64_t seed, std::uint64_t replica, int n, const TorusGrid& g,
                                     double dt, double t_final, bool renormalized = true, double gamma = 0.75);

struct PamOptions {
    double blowup = 1e6;        // sup-norm triggering the explosion flag
    double picard_tol = 1e-10;  // on the sup of coefficient increments
    int picard_max = 20;
};

struct PamSolution {
    FieldPath u;  // at t_i = i·dt up to the explosion time
    bool exploded = false;
    double explosion_time = 0.0;
    int max_picard = 0;
};

// ETD2 with Picard iteration on the renormalized equation.
PamSolution solve_pam_direct(const PamEnhancement& enh, const Nonlinearity& F, const SpectralField& u0,
                             const PamOptions& opt = {});

// Linear F only: u = e^X v with ℒv = 2∇X·∇v + (|∇X|² − f_n(t))v.
PamSolution solve_pam_linear_transform(const PamEnhancement& enh, const SpectralField& u0,
                                       const PamOptions& opt = {});

struct ParacontrolledState {
    SpectralField u, uX, sharp;  // u = uX ≺ X + sharp
};

struct ParacontrolledProduct {
    SpectralField full, sharp;
};
// u·ξ = u≺ξ + u≻ξ + sharp with sharp = u♯∘ξ + C(uX, X, ξ) + uX·(X∘ξ − f_n).
ParacontrolledProduct paracontrolled_product(const ParacontrolledState& s, const SpectralField& X,
                                             const SpectralField& xi, const SpectralField& resonant,
                                             const DyadicPartition& part);

struct ParacontrolledSolution {
    std::vector<ParacontrolledState> path;
    bool exploded = false;
    double explosion_time = 0.0;
    int max_picard = 0;
    // Largest |u − (uX ≺ X + u♯)| over accepted steps.
    double decomposition_defect = 0.0;
};

ParacontrolledSolution solve_pam_paracontrolled(const PamEnhancement& enh, const Nonlinearity& F,
                                                const SpectralField& u0, const DyadicPartition& part,
                                                const PamOptions& opt = {});

// Relative sup-norm distance of grid values, max|a − b| / max|b|.
double relative_sup(const SpectralField& a, const SpectralField& b);

}  // namespace parapde
