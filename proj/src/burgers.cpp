#include "parapde/burgers.hpp"
#include "parapde/errors.hpp"

#include <cmath>

namespace parapde {

TorusGrid galerkin_grid(const GalerkinConfig& c) {
    if (c.N < 1) throw ArgumentError("galerkin: N must be at least 1");
    const int M = c.modes == 0 ? 2 * c.N + 2 : c.modes;
    if (M % 2 != 0 || M / 2 - 1 < c.N) throw ArgumentError("galerkin: grid too small for the band");
    return TorusGrid(1, M);
}

GalerkinState galerkin_init(const GalerkinConfig& c, std::uint64_t seed, std::uint64_t replica, bool stationary) {
    const TorusGrid g = galerkin_grid(c);
    GalerkinState s;
    s.N = c.N;
    s.nonlinear = c.nonlinear;
    s.noise = c.noise;
    s.rng = Rng(replica_seed(seed, "burgers", replica));
    s.v = stationary ? sample_hermitian(g, s.rng, [](std::size_t) { return 0.5; }) : SpectralField(g);
    return s;
}

SpectralField burgers_drift(const SpectralField& v, int N) {
    if (v.grid().dim() != 1) throw StructuralError("burgers_drift: one-dimensional fields only");
    if (N > v.grid().max_mode()) throw AliasingError("burgers_drift: band exceeds the grid");
    const SpectralField p = project_modes(v, N);
    return project_modes(derivative(dealiased_product(p, p), 0), N);
}

cplx drift_pairing(const SpectralField& v, const SpectralField& b, int N) {
    require_same_grid(v, b, "drift_pairing");
    const auto& g = v.grid();
    cplx s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (g.kinf(i) <= N && !g.nyquist(i)) s += v[g.neg(i)] * b[i];
    return s;
}

double energy(const SpectralField& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += std::norm(v[i]);
    return s;
}

double dissipation(const SpectralField& v) {
    const auto& k2 = v.grid().k2_table();
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += k2[i] * std::norm(v[i]);
    return -2.0 * s;
}

SpectralField burgers_increment(const TorusGrid& g, Rng& rng, double dt) {
    return ou_increment(g, rng, dt, 0.5);
}

SpectralField aggregate_increments(const std::vector<SpectralField>& fine, double dt) {
    if (fine.empty()) throw ArgumentError("aggregate_increments: no increments");
    const ExpIntegrator integ(fine[0].grid(), dt);
    SpectralField g = fine[0];
    for (std::size_t j = 1; j < fine.size(); ++j) {
        g = integ.propagate(g);
        g += fine[j];
    }
    return g;
}

void galerkin_step(GalerkinState& s, const ExpIntegrator& integ, const SpectralField* increment) {
    SpectralField next = s.nonlinear ? integ.step(s.v, burgers_drift(s.v, s.N)) : integ.propagate(s.v);
    if (increment) next += *increment;
    s.v = std::move(next);
    s.time += integ.dt();
}

void galerkin_step(GalerkinState& s, double dt) {
    const ExpIntegrator integ(s.v.grid(), dt);
    if (s.noise) {
        const SpectralField inc = burgers_increment(s.v.grid(), s.rng, dt);
        galerkin_step(s, integ, &inc);
    } else {
        galerkin_step(s, integ, nullptr);
    }
}

GalerkinState galerkin_evolve(GalerkinState s, double dt, double t_final) {
    if (!(dt > 0.0)) throw ArgumentError("galerkin: dt must be positive");
    const ExpIntegrator integ(s.v.grid(), dt);
    const long steps = std::lround((t_final - s.time) / dt);
    for (long n = 0; n < steps; ++n) {
        if (s.noise) {
            const SpectralField inc = burgers_increment(s.v.grid(), s.rng, dt);
            galerkin_step(s, integ, &inc);
        } else {
            galerkin_step(s, integ, nullptr);
        }
    }
    return s;
}

void DriftAccumulator::push(const SpectralField& b, double dt) {
    if (last_) {
        value_.axpy(0.5 * dt, *last_);
        value_.axpy(0.5 * dt, b);
        time_ += dt;
    }
    last_ = b;
    ++n_;
}

FieldPath accumulate_drift(const FieldPath& path, int N, double dt) {
    if (path.empty()) return {};
    DriftAccumulator acc(path[0].grid());
    FieldPath out;
    out.reserve(path.size());
    for (const auto& v : path) {
        acc.push(burgers_drift(v, N), dt);
        out.push_back(acc.value());
    }
    return out;
}

cplx ito_aux_F(const SpectralField& rho, int k, int cutoff) {
    if (k == 0) throw ArgumentError("ito_aux_F: k must be nonzero");
    if (rho.grid().dim() != 1) throw StructuralError("ito_aux_F: one-dimensional fields only");
    if (cutoff > rho.grid().max_mode()) throw ArgumentError("ito_aux_F: cutoff exceeds the grid band");
    cplx s = 0.0;
    for (int l = -cutoff; l <= cutoff; ++l) {
        const int m = k - l;
        if (std::abs(m) > cutoff) continue;
        const cplx h = rho.at({l, 0, 0}) * rho.at({m, 0, 0});  // δ_{ℓ+m=0} never fires for k ≠ 0
        s += h / double(l * l + m * m);
    }
    return cplx(0.0, -double(k)) * s;
}

double ito_aux_F_second_moment(int k, int cutoff) {
    if (k == 0) throw ArgumentError("ito_aux_F: k must be nonzero");
    double s = 0.0;
    for (int l = -cutoff; l <= cutoff; ++l) {
        const int m = k - l;
        if (std::abs(m) > cutoff) continue;
        const double a = double(l * l + m * m);
        s += 1.0 / (a * a);
    }
    return 0.5 * double(k) * double(k) * s;
}

}  // namespace parapde
