#include "common.hpp"
#include "mc.hpp"
#include "parapde/burgers.hpp"
#include "parapde/errors.hpp"

#include <doctest.h>

using namespace parapde;
using testutil::loglog_slope;
using testutil::Moments;

TEST_CASE("burgers drift") {
    GalerkinConfig c;
    c.N = 8;
    const TorusGrid g = galerkin_grid(c);
    CHECK(g.modes() == 18);

    SpectralField v(g);
    const double a = 0.8;
    v.set({1, 0, 0}, a);
    v.set({-1, 0, 0}, a);
    const auto b = burgers_drift(v, c.N);
    CHECK(std::abs(b.at({2, 0, 0}) - cplx(0.0, 2.0 * a * a / std::sqrt(kTwoPi))) < 1e-14);
    CHECK(std::abs(b.at({-2, 0, 0}) - cplx(0.0, -2.0 * a * a / std::sqrt(kTwoPi))) < 1e-14);
    CHECK(std::abs(b.at({0, 0, 0})) < 1e-14);
    CHECK(testutil::max_abs(burgers_drift(SpectralField(g), c.N)) == 0.0);

    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 5; ++trial) {
        const auto w = testutil::random_field(g, c.N, rng);
        const auto d = burgers_drift(w, 5);
        // ik Σ 1_{|ℓ|,|m|,|k|≤5} w(ℓ)w(m)
        const auto p = project_modes(w, 5);
        const auto ref = project_modes(derivative(testutil::brute_product(p, p), 0), 5);
        CHECK(testutil::max_abs_diff(d, ref) < 1e-12);
        CHECK(max_hermitian_defect(d) < 1e-14);
    }

    c.N = 32;
    const TorusGrid g32 = galerkin_grid(c);
    for (int trial = 0; trial < 100; ++trial) {
        const auto w = testutil::random_field(g32, 32, rng);
        const double nv = std::sqrt(energy(w));
        CHECK(std::abs(drift_pairing(w, burgers_drift(w, 32), 32)) <= 1e-10 * nv * nv * nv);
    }
    CHECK_THROWS_AS(burgers_drift(SpectralField(g), 9), AliasingError);
}

TEST_CASE("galerkin step without nonlinearity is the OU process") {
    GalerkinConfig c;
    c.N = 8;
    c.nonlinear = false;
    const double dt = 0.05, t = 0.5;
    std::vector<Moments> m(4);
    for (int r = 0; r < 3000; ++r) {
        auto s = galerkin_evolve(galerkin_init(c, 17, r, false), dt, t);
        for (int k = 1; k <= 3; ++k) m[k].add(std::norm(s.v.at({k, 0, 0})));
    }
    for (int k = 1; k <= 3; ++k) CHECK(m[k].within(-0.5 * std::expm1(-2.0 * k * k * t)));
}

TEST_CASE("galerkin burgers preserves white noise") {
    GalerkinConfig c;
    c.N = 8;
    const double dt = 5e-3, T = 0.5;
    std::vector<Moments> m(c.N + 1);
    for (int r = 0; r < 1000; ++r) {
        auto s = galerkin_evolve(galerkin_init(c, 23, r, true), dt, T);
        CHECK(s.time == doctest::Approx(T));
        for (int k = 1; k <= c.N; ++k) m[k].add(std::norm(s.v.at({k, 0, 0})));
    }
    for (int k = 1; k <= c.N; ++k) CHECK(m[k].within(0.5));
}

TEST_CASE("energy identity without noise") {
    GalerkinConfig c;
    c.N = 16;
    c.noise = false;
    auto s = galerkin_init(c, 3, 0, true);
    const double dt = 1e-5;
    const ExpIntegrator integ(s.v.grid(), dt);
    for (int n = 0; n < 200; ++n) {
        const auto b = burgers_drift(s.v, c.N);
        const double A = energy(s.v), D = dissipation(s.v);
        CHECK(std::abs(drift_pairing(s.v, b, c.N)) <= 1e-10 * std::pow(A, 1.5));
        galerkin_step(s, integ, nullptr);
        CHECK((energy(s.v) - A) / dt == doctest::Approx(D).epsilon(1e-2));
    }
}

TEST_CASE("matched noise self-convergence") {
    GalerkinConfig c;
    c.N = 8;
    const double T = 0.25, dt_ref = 1.0 / 2048;
    const std::vector<int> coarsen{8, 16, 32};
    std::vector<double> err(coarsen.size(), 0.0);
    const int R = 20;
    for (int r = 0; r < R; ++r) {
        auto init = galerkin_init(c, 31, r, true);
        init.v *= 2.0;
        const long steps = std::lround(T / dt_ref);
        std::vector<SpectralField> fine;
        for (long n = 0; n < steps; ++n) fine.push_back(burgers_increment(init.v.grid(), init.rng, dt_ref));
        auto ref = init;
        const ExpIntegrator iref(init.v.grid(), dt_ref);
        for (const auto& inc : fine) galerkin_step(ref, iref, &inc);
        for (std::size_t l = 0; l < coarsen.size(); ++l) {
            const int f = coarsen[l];
            auto s = init;
            const ExpIntegrator integ(init.v.grid(), f * dt_ref);
            for (long n = 0; n < steps; n += f) {
                const std::vector<SpectralField> chunk(fine.begin() + n, fine.begin() + n + f);
                const auto inc = aggregate_increments(chunk, dt_ref);
                galerkin_step(s, integ, &inc);
            }
            err[l] += energy(s.v - ref.v) / R;
        }
    }
    std::vector<double> h, e;
    for (std::size_t l = 0; l < coarsen.size(); ++l) {
        h.push_back(coarsen[l] * dt_ref);
        e.push_back(std::sqrt(err[l]));
    }
    const double order = loglog_slope(h, e);
    MESSAGE("matched-noise strong order " << order);
    CHECK(order == doctest::Approx(1.0).epsilon(0.4));
}

TEST_CASE("aggregated increments have the coarse OU law") {
    const TorusGrid g(1, 16);
    Rng rng(5);
    const double dt = 0.01;
    Moments m1, m3;
    for (int r = 0; r < 4000; ++r) {
        std::vector<SpectralField> fine;
        for (int j = 0; j < 4; ++j) fine.push_back(burgers_increment(g, rng, dt));
        const auto G = aggregate_increments(fine, dt);
        m1.add(std::norm(G.at({1, 0, 0})));
        m3.add(std::norm(G.at({3, 0, 0})));
    }
    CHECK(m1.within(-0.5 * std::expm1(-2.0 * 1 * 4 * dt)));
    CHECK(m3.within(-0.5 * std::expm1(-2.0 * 9 * 4 * dt)));
}

TEST_CASE("drift accumulator") {
    GalerkinConfig c;
    c.N = 8;
    const TorusGrid g = galerkin_grid(c);
    const FieldPath zero(10, SpectralField(g));
    for (const auto& f : accumulate_drift(zero, c.N, 0.1)) CHECK(testutil::max_abs(f) == 0.0);

    // noise-free path for refinement; trapezoid on a smooth path is second order
    c.noise = false;
    auto s0 = galerkin_init(c, 7, 0, true);
    const double T = 0.2;
    const int fine = 1024;
    FieldPath path{s0.v};
    auto s = s0;
    const ExpIntegrator integ(g, T / fine);
    for (int n = 0; n < fine; ++n) {
        galerkin_step(s, integ, nullptr);
        path.push_back(s.v);
    }
    const auto full = accumulate_drift(path, c.N, T / fine);
    // additivity: [0, T/2] + [T/2, T]
    DriftAccumulator a(g), b(g);
    for (int n = 0; n <= fine / 2; ++n) a.push(burgers_drift(path[n], c.N), T / fine);
    for (int n = fine / 2; n <= fine; ++n) b.push(burgers_drift(path[n], c.N), T / fine);
    CHECK(testutil::max_abs_diff(a.value() + b.value(), full.back()) < 1e-13 * testutil::max_abs(full.back()));
    CHECK(a.time() + b.time() == doctest::Approx(T));

    std::vector<double> h, e;
    for (int stride : {64, 32, 16}) {
        FieldPath sub;
        for (int n = 0; n <= fine; n += stride) sub.push_back(path[n]);
        const auto acc = accumulate_drift(sub, c.N, stride * T / fine);
        h.push_back(stride * T / fine);
        e.push_back(testutil::max_abs_diff(acc.back(), full.back()));
    }
    CHECK(loglog_slope(h, e) >= 1.0);
}

TEST_CASE("ito auxiliary functional") {
    const TorusGrid g(1, 64);
    SpectralField z(g);
    for (int k = 1; k < 5; ++k) CHECK(std::abs(ito_aux_F(z, k, 20)) == 0.0);
    CHECK_THROWS_AS(ito_aux_F(z, 0, 20), ArgumentError);

    SpectralField rho(g);
    const cplx c1(0.6, 0.3), c2(-0.2, 0.5);
    rho.set({1, 0, 0}, c1);
    rho.set({-1, 0, 0}, std::conj(c1));
    rho.set({2, 0, 0}, c2);
    rho.set({-2, 0, 0}, std::conj(c2));
    // e_3: (1,2) and (2,1), each with ℓ² + m² = 5
    CHECK(std::abs(ito_aux_F(rho, 3, 20) - cplx(0.0, -3.0) * 2.0 * c1 * c2 / 5.0) < 1e-15);
    // e_2: only (1,1) lies in the support
    CHECK(std::abs(ito_aux_F(rho, 2, 20) - cplx(0.0, -2.0) * c1 * c1 / 2.0) < 1e-15);
    // e_1: (−1,2) and (2,−1), each with 5
    CHECK(std::abs(ito_aux_F(rho, 1, 20) - cplx(0.0, -1.0) * 2.0 * std::conj(c1) * c2 / 5.0) < 1e-15);

    // white-noise second moment against the pairing formula, and cutoff stability
    for (int k : {1, 3}) {
        const double e10 = ito_aux_F_second_moment(k, 10), e20 = ito_aux_F_second_moment(k, 20);
        CHECK(std::abs(e20 / e10 - 1.0) < 0.05);
        Moments m10, m20;
        for (int r = 0; r < 4000; ++r) {
            const auto eta = sample_space_white_noise(g, 77, r);
            m10.add(std::norm(ito_aux_F(eta, k, 10)));
            m20.add(std::norm(ito_aux_F(eta, k, 20)));
        }
        CHECK(m10.within(e10));
        CHECK(m20.within(e20));
        CHECK(std::abs(m20.mean() / m10.mean() - 1.0) < 0.05);
    }
}
