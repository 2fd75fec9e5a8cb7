#include "parapde/gaussian.hpp"
#include "parapde/errors.hpp"

#include <cmath>

namespace parapde {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t hash_name(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t replica_seed(std::uint64_t master, std::string_view experiment, std::uint64_t replica) {
    return splitmix64(splitmix64(master ^ hash_name(experiment)) + replica);
}

cplx Rng::complex_normal(double var) {
    const double s = std::sqrt(0.5 * var);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
}

double noise_variance(NoiseNormalization n) { return n == NoiseNormalization::Half ? 0.5 : 1.0; }

SpectralField sample_hermitian(const TorusGrid& g, Rng& rng, const std::function<double(std::size_t)>& var) {
    SpectralField f(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.nyquist(i)) continue;
        const std::size_t j = g.neg(i);
        if (j < i) continue;
        const double v = var(i);
        if (j == i) {
            const double z = rng.normal();
            f[i] = std::sqrt(v) * z;
        } else {
            f[i] = rng.complex_normal(v);
            f[j] = std::conj(f[i]);
        }
    }
    return f;
}

SpectralField sample_space_white_noise(const TorusGrid& g, std::uint64_t seed, std::uint64_t replica,
                                       NoiseNormalization norm) {
    Rng rng(replica_seed(seed, "space-white-noise", replica));
    const double v = noise_variance(norm);
    return sample_hermitian(g, rng, [v](std::size_t) { return v; });
}

OuState ou_zero(const TorusGrid& g, std::uint64_t seed, std::uint64_t replica, NoiseNormalization norm) {
    OuState s;
    s.field = SpectralField(g);
    s.rng = Rng(replica_seed(seed, "ou", replica));
    s.norm = norm;
    return s;
}

OuState ou_stationary(const TorusGrid& g, std::uint64_t seed, std::uint64_t replica, NoiseNormalization norm) {
    OuState s = ou_zero(g, seed, replica, norm);
    const double v = noise_variance(norm);
    s.field = sample_hermitian(g, s.rng, [v](std::size_t) { return v; });
    return s;
}

SpectralField ou_increment(const TorusGrid& g, Rng& rng, double dt, double var,
                           const std::vector<double>* multiplier) {
    const auto& k2 = g.k2_table();
    SpectralField inc = sample_hermitian(g, rng, [&](std::size_t i) {
        if (k2[i] == 0.0) return 0.0;
        const double m = multiplier ? (*multiplier)[i] : 1.0;
        return m * m * var * -std::expm1(-2.0 * k2[i] * dt);
    });
    return inc;
}

void ou_advance(OuState& s, double dt) {
    if (!(dt > 0.0)) throw ArgumentError("ou_step: dt must be positive");
    const auto& g = s.field.grid();
    auto inc = ou_increment(g, s.rng, dt, noise_variance(s.norm));
    const auto& k2 = g.k2_table();
    for (std::size_t i = 0; i < s.field.size(); ++i)
        s.field[i] = std::exp(-k2[i] * dt) * s.field[i] + inc[i];
    s.time += dt;
}

OuState ou_step(OuState s, double dt) {
    ou_advance(s, dt);
    return s;
}

Mollifier gaussian_mollifier() {
    return {"gaussian", [](double z) { return std::exp(-0.5 * z * z); }};
}

std::vector<double> mollifier_table(const TorusGrid& g, int n, const Mollifier& m) {
    if (n <= 0) throw ArgumentError("mollification level must be positive");
    std::vector<double> t(g.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = m.hat(g.knorm(i) / n);
    return t;
}

SpectralField mollify(const SpectralField& xi, int n, const Mollifier& m) {
    const auto t = mollifier_table(xi.grid(), n, m);
    SpectralField out = xi;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= t[i];
    return out;
}

RadialProfile gaussian_profile() {
    return {"gaussian", [](double r) { return std::exp(-0.5 * r * r); }, 1.0};
}

void validate_potential(const PotentialParams& p, int d) {
    if (!(p.beta > 0.0) || p.beta > d) throw ArgumentError("potential: beta must lie in (0, d]");
    if (!(p.eps > 0.0)) throw ArgumentError("potential: eps must be positive");
    const double inv = 1.0 / p.eps;
    if (std::abs(inv - std::round(inv)) > 1e-9)
        throw ArgumentError("potential: eps must be the reciprocal of an integer");
}

double potential_spectrum(const PotentialParams& p, int d, double knorm) {
    return std::pow(knorm, p.beta - d) * p.rtilde.f(knorm);
}

SpectralField sample_potential(const TorusGrid& g, const PotentialParams& p, std::uint64_t seed,
                               std::uint64_t replica) {
    validate_potential(p, g.dim());
    Rng rng(replica_seed(seed, "potential", replica));
    const int d = g.dim();
    // Coefficient of e^{im·x}/(2π)^{d/2}: (2π)^{d/4} ε^{d/2−α} √R(εm) g(m)
    const double amp2 = std::pow(kTwoPi, 0.5 * d) * std::pow(p.eps, d - 2.0 * p.alpha);
    return sample_hermitian(g, rng, [&](std::size_t i) {
        const double kn = g.knorm(i);
        if (kn == 0.0) return 0.0;
        return amp2 * potential_spectrum(p, d, p.eps * kn);
    });
}

}  // namespace parapde
