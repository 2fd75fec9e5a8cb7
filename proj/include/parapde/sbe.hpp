#pragma once

#include "parapde/besov.hpp"
#include "parapde/gaussian.hpp"
#include "parapde/spectral.hpp"
#include "parapde/wick.hpp"

#include <cstdint>
#include <vector>

namespace parapde {

// Stochastic Burgers on 𝕋¹: ℒu = ∂_x(u²) + ∂_xθ_n with θ_n space–time white noise mollified in space.

// Per-step forcing. theta[i] is unit-variance space white noise for step i; the exact OU
// increment of X over that step is G_i = ∂_x(A θ_i), A(k) = φ̂(k/n)√((1 − e^{−2k²dt})/2)/|k|.
struct SbeNoise {
    int n = 8;
    double dt = 0.0;
    std::vector<SpectralField> theta;
    std::size_t steps() const { return theta.size(); }
};

SbeNoise sbe_noise(const TorusGrid& g, int n, double dt, std::size_t steps, std::uint64_t seed,
                   std::uint64_t replica, const Mollifier& m = gaussian_mollifier());
// X increments G_i; scaled by lam (forcing amplitude).
std::vector<SpectralField> sbe_increments(const SbeNoise& noise, double lam = 1.0,
                                          const Mollifier& m = gaussian_mollifier());
// Increments over k consecutive steps combined exactly.
std::vector<SpectralField> coarsen_increments(const std::vector<SpectralField>& fine, double dt, int k);

struct SbeEnhancement {
    int n = 8;
    double gamma = 0.4;
    double dt = 0.0;
    FieldPath X, cherry, chain, balanced, chain3;  // X, X🌱 = B(X,X), B(X🌱,X), B(X🌱,X🌱), B(B(X🌱,X),X)
    FieldPath Q;                                   // J(∂_x X)
    FieldPath res_cherry, res_Q;                   // X🌱∘X, Q∘X
    std::size_t steps() const { return X.empty() ? 0 : X.size() - 1; }
};

// X path from increments: X_{i+1} = e^{−k²dt} X_i + G_i, X_0 = 0.
FieldPath ou_path(const std::vector<SpectralField>& increments, double dt);

SbeEnhancement build_sbe_enhancement(const std::vector<SpectralField>& increments, double dt, int n,
                                     const DyadicPartition& part, double gamma = 0.4);
SbeEnhancement build_sbe_enhancement(std::uint64_t seed, std::uint64_t replica, int n, const TorusGrid& g,
                                     double dt, double t_final, double gamma = 0.4);

// Galerkin exponential Euler on the full grid band with the given increments.
FieldPath solve_sbe_galerkin(const std::vector<SpectralField>& increments, double dt, const SpectralField& u0);

enum class SbeScheme { ExpEuler, Etd2 };

struct SbeOptions {
    SbeScheme scheme = SbeScheme::Etd2;
    double blowup = 1e6;
    double picard_tol = 1e-10;
    int picard_max = 20;
};

struct SbeParacontrolledState {
    SpectralField uQ, uprime, sharp;  // uQ = u′ ≺ Q + u♯, u′ = 4X-chain + 2uQ
    SpectralField u;                  // X + X🌱 + 2X-chain + uQ
};

struct SbeSolution {
    std::vector<SbeParacontrolledState> path;
    bool exploded = false;
    double explosion_time = 0.0;
    int max_picard = 0;
    double ansatz_defect = 0.0;
};

// ℒuQ = ℒX-bal + 4ℒX-chain′ + 2∂_x(uQ·X) + 2∂_x(X🌱(uQ + 2X-chain)) + ∂_x((uQ + 2X-chain)²),
// with uQ·X resolved through uQ = u′≺Q + u♯ and Q∘X.
SbeSolution solve_sbe_paracontrolled(const SbeEnhancement& enh, const SpectralField& u0,
                                     const DyadicPartition& part, const SbeOptions& opt = {});

// Σ_{d(τ) < order} c(τ) X^τ along the path.
FieldPath truncated_tree_expansion(const FieldPath& X, double dt, int order);

double relative_l2(const SpectralField& a, const SpectralField& b);

}  // namespace parapde
