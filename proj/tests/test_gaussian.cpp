#include "common.hpp"
#include "mc.hpp"

#include "parapde/errors.hpp"
#include "parapde/gaussian.hpp"
#include "parapde/renorm.hpp"

#include <doctest.h>

#include <cmath>

using namespace parapde;
using testutil::Moments;

TEST_CASE("white noise moments") {
    TorusGrid g(1, 16);
    Moments m3, cross, zero;
    for (int r = 0; r < 10000; ++r) {
        auto xi = sample_space_white_noise(g, 42, r);
        m3.add(std::norm(xi.at({3, 0, 0})));
        cross.add((xi.at({3, 0, 0}) * xi.at({2, 0, 0})).real());
        zero.add(xi[0].real() * xi[0].real());
        CHECK(max_hermitian_defect(xi) == 0.0);
        CHECK(xi[0].imag() == 0.0);
    }
    CHECK(m3.within(0.5));
    CHECK(cross.within(0.0));
    CHECK(zero.within(0.5));
    auto a = sample_space_white_noise(g, 42, 7);
    auto b = sample_space_white_noise(g, 42, 7);
    CHECK(a.coeffs() == b.coeffs());
    CHECK(a.coeffs() != sample_space_white_noise(g, 42, 8).coeffs());
    Moments unit;
    for (int r = 0; r < 4000; ++r)
        unit.add(std::norm(sample_space_white_noise(g, 5, r, NoiseNormalization::Unit).at({4, 0, 0})));
    CHECK(unit.within(1.0));
}

TEST_CASE("ou transitions") {
    TorusGrid g(1, 16);
    Moments zero_start, stat, two, one;
    for (int r = 0; r < 10000; ++r) {
        auto s = ou_step(ou_zero(g, 1, r), 0.5);
        zero_start.add(std::norm(s.field.at({1, 0, 0})));
        auto st = ou_stationary(g, 2, r);
        const cplx x0 = st.field[0];
        ou_advance(st, 0.3);
        stat.add(std::norm(st.field.at({2, 0, 0})));
        CHECK(st.field[0] == x0);
        auto a = ou_step(ou_step(ou_zero(g, 3, r), 0.02), 0.05);
        two.add(std::norm(a.field.at({2, 0, 0})));
        auto b = ou_step(ou_zero(g, 4, r), 0.07);
        one.add(std::norm(b.field.at({2, 0, 0})));
    }
    CHECK(zero_start.within((1.0 - std::exp(-1.0)) / 2.0));
    CHECK(std::abs((1.0 - std::exp(-1.0)) / 2.0 - 0.3161) < 1e-4);
    CHECK(stat.within(0.5));
    const double expect = (1.0 - std::exp(-2.0 * 4.0 * 0.07)) / 2.0;
    CHECK(two.within(expect));
    CHECK(one.within(expect));
    CHECK(std::abs(two.mean() - one.mean()) <= 3.0 * std::hypot(two.stderr_(), one.stderr_()));
    auto s = ou_zero(g, 1, 0);
    CHECK_THROWS_AS(ou_advance(s, 0.0), ArgumentError);
}

TEST_CASE("ou path regularity exponent") {
    // E‖X_{s+τ} − X_s‖²_{H^α} ∝ τ^κ with α = −1/2 − κ
    const double kappa = 0.25, alpha = -0.5 - kappa;
    TorusGrid g(1, 4096);
    std::vector<double> taus{0.005, 0.01, 0.02, 0.04}, vals;
    for (double tau : taus) {
        Moments m;
        for (int r = 0; r < 100; ++r) {
            auto s = ou_stationary(g, 9, r);
            const auto x0 = s.field;
            ou_advance(s, tau);
            double h = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i)
                h += std::pow(1.0 + g.k2(i), alpha) * std::norm(s.field[i] - x0[i]);
            m.add(h);
        }
        vals.push_back(m.mean());
    }
    CHECK(std::abs(testutil::loglog_slope(taus, vals) - kappa) <= 0.15);
}

TEST_CASE("square of ou diverges: mc tracks the partial sum") {
    const int N = 16, k = 3;
    const double t = 0.5;
    TorusGrid g(1, 2 * N + 2);
    Moments m;
    for (int r = 0; r < 6000; ++r) {
        auto s = ou_step(ou_zero(g, 17, r), t);
        cplx acc = 0.0;
        for (int l = -N; l <= N; ++l) {
            const int q = k - l;
            if (std::abs(q) > N) continue;
            acc += s.field.at({l, 0, 0}) * s.field.at({q, 0, 0});
        }
        m.add(std::norm(acc));
    }
    CHECK(m.within(ou_square_variance_partial(k, t, N)));
}

TEST_CASE("mollifier") {
    TorusGrid g(2, 32);
    auto xi = sample_space_white_noise(g, 1, 0);
    auto m = mollify(xi, 4);
    CHECK(m[0] == xi[0]);
    const auto i = g.flat({4, 0, 0});
    CHECK(std::abs(m[i] - xi[i] * std::exp(-0.5)) < 1e-15);
    auto big = mollify(xi, 32 * 22);
    double rel = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j)
        if (std::abs(xi[j]) > 0) rel = std::max(rel, std::abs(big[j] - xi[j]) / std::abs(xi[j]));
    CHECK(rel < 1e-3);
    CHECK_THROWS_AS(mollify(xi, 0), ArgumentError);
}

TEST_CASE("potential sampler") {
    TorusGrid g(2, 32);
    PotentialParams bad;
    bad.beta = 3.0;
    CHECK_THROWS_AS(sample_potential(g, bad, 1, 0), ArgumentError);
    PotentialParams ep;
    ep.beta = 2.0;
    ep.eps = 0.3;
    CHECK_THROWS_AS(sample_potential(g, ep, 1, 0), ArgumentError);

    // β = d, α = 0, ε = 1: pointwise variance is the direct lattice sum (2π)^{−d/2} Σ_{m≠0} R(m).
    PotentialParams p;
    p.beta = 2.0;
    p.alpha = 0.0;
    p.eps = 1.0;
    double direct = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g.k2(i) > 0 && !g.nyquist(i)) direct += potential_spectrum(p, 2, g.knorm(i));
    direct /= kTwoPi;
    Moments m;
    for (int r = 0; r < 5000; ++r) m.add(std::pow(value_at(sample_potential(g, p, 3, r), {0, 0, 0}), 2));
    CHECK(m.within(direct));
}
