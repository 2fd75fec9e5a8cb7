#pragma once

#include "parapde/spectral.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>

namespace parapde {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t hash_name(std::string_view s);
// Seed of replica r of an experiment; independent of which other experiments exist.
std::uint64_t replica_seed(std::uint64_t master, std::string_view experiment, std::uint64_t replica);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double normal() { return nd_(eng_); }
    double uniform() { return ud_(eng_); }
    // Complex Gaussian with E|z|² = var (real and imaginary parts each var/2).
    cplx complex_normal(double var);

private:
    std::mt19937_64 eng_;
    std::normal_distribution<double> nd_;
    std::uniform_real_distribution<double> ud_;
};

// Per-mode variance convention for white noise: E|ξ̂(k)|² = 1/2 (default) or 1.
enum class NoiseNormalization { Half, Unit };
double noise_variance(NoiseNormalization n);

// Gaussian field with E|f̂(k)|² = var(flat) and exact Hermitian pairing; self-paired modes real.
SpectralField sample_hermitian(const TorusGrid& g, Rng& rng, const std::function<double(std::size_t)>& var);

SpectralField sample_space_white_noise(const TorusGrid& g, std::uint64_t seed, std::uint64_t replica,
                                       NoiseNormalization norm = NoiseNormalization::Half);

struct OuState {
    double time = 0.0;
    SpectralField field;
    Rng rng{0};
    NoiseNormalization norm = NoiseNormalization::Half;
};

OuState ou_zero(const TorusGrid& g, std::uint64_t seed, std::uint64_t replica,
                NoiseNormalization norm = NoiseNormalization::Half);
OuState ou_stationary(const TorusGrid& g, std::uint64_t seed, std::uint64_t replica,
                      NoiseNormalization norm = NoiseNormalization::Half);

// Exact transition over dt: X ← e^{−k²dt}X + G, E|G_k|² = v(1 − e^{−2k²dt}), mode 0 frozen.
OuState ou_step(OuState s, double dt);
void ou_advance(OuState& s, double dt);

// Increment G alone, with per-mode amplitude multiplier (e.g. a mollifier).
SpectralField ou_increment(const TorusGrid& g, Rng& rng, double dt, double var,
                           const std::vector<double>* multiplier = nullptr);

struct Mollifier {
    std::string name;
    std::function<double(double)> hat;  // ℱφ(|z|), hat(0) = 1
};
Mollifier gaussian_mollifier();

std::vector<double> mollifier_table(const TorusGrid& g, int n, const Mollifier& m);
SpectralField mollify(const SpectralField& xi, int n, const Mollifier& m = gaussian_mollifier());

struct RadialProfile {
    std::string name;
    std::function<double(double)> f;
    double sup = 1.0;
};
RadialProfile gaussian_profile();

struct PotentialParams {
    double eps = 1.0;
    double alpha = 0.0;
    double beta = 1.0;
    RadialProfile rtilde = gaussian_profile();
};

// R(k) = |k|^{β−d} R̃(|k|)
double potential_spectrum(const PotentialParams& p, int d, double knorm);
void validate_potential(const PotentialParams& p, int d);

// V_ε(x) = (2π)^{−d/4} ε^{d/2−α} Σ_{m≠0} e^{i m·x} √R(εm) g(m)
SpectralField sample_potential(const TorusGrid& g, const PotentialParams& p, std::uint64_t seed,
                               std::uint64_t replica);

}  // namespace parapde
