#include "common.hpp"
#include "mc.hpp"
#include "parapde/errors.hpp"
#include "parapde/sbe.hpp"

#include <array>

#include <doctest.h>

using namespace parapde;
using testutil::loglog_slope;

namespace {

SpectralField smooth_initial(const TorusGrid& g) {
    std::vector<double> v(g.size());
    for (int i = 0; i < g.modes(); ++i) v[i] = 0.3 * std::cos(g.point(i)) + 0.2 * std::sin(2 * g.point(i));
    return forward(g, v);
}

}  // namespace

TEST_CASE("sbe increments") {
    const TorusGrid g(1, 64);
    const double dt = 0.01;
    const auto noise = sbe_noise(g, 8, dt, 400, 3, 0);
    const auto G = sbe_increments(noise);
    REQUIRE(G.size() == 400);
    // mode 0 carries no forcing
    for (const auto& x : G) CHECK(std::abs(x[0]) == 0.0);
    // E|G(k)|² = k²A(k)² = φ̂(k/n)²(1 − e^{−2k²dt})/2
    const auto moll = mollifier_table(g, 8, gaussian_mollifier());
    for (int k : {1, 3, 6}) {
        testutil::Moments m;
        for (const auto& x : G) m.add(std::norm(x.at({k, 0, 0})));
        const double k2 = double(k) * k;
        CHECK(m.within(moll[k] * moll[k] * -0.5 * std::expm1(-2.0 * k2 * dt)));
    }
    // constant shifts of θ are invisible
    auto shifted = noise;
    for (auto& th : shifted.theta) th += constant_field(g, 2.5);
    const auto Gs = sbe_increments(shifted);
    for (std::size_t i = 0; i < G.size(); ++i) CHECK(testutil::max_abs_diff(G[i], Gs[i]) == 0.0);
    // amplitude is linear
    const auto G2 = sbe_increments(noise, 0.5);
    CHECK(testutil::max_abs_diff(0.5 * G[7], G2[7]) < 1e-15);
    // coarsening reproduces the path at the coarse times
    const auto X = ou_path(G, dt);
    const auto Xc = ou_path(coarsen_increments(G, dt, 4), 4 * dt);
    for (std::size_t i = 0; i < Xc.size(); ++i) CHECK(testutil::max_abs_diff(Xc[i], X[4 * i]) < 1e-13);
    CHECK_THROWS_AS(coarsen_increments(G, dt, 3), ArgumentError);
}

TEST_CASE("sbe enhancement") {
    const TorusGrid g(1, 64);
    const double dt = 0.01;
    const auto enh = build_sbe_enhancement(5, 0, 8, g, dt, 0.2);
    REQUIRE(enh.steps() == 20);
    for (const auto* p : {&enh.X, &enh.cherry, &enh.chain, &enh.balanced, &enh.chain3, &enh.Q})
        CHECK(testutil::max_abs((*p)[0]) == 0.0);
    // tree paths agree with the generic tree terms
    const auto trees = enumerate_trees(3);
    auto by_shape = [&](const std::string& s) -> const BinaryTree& {
        for (const auto& t : trees)
            if (t->shape == s) return *t;
        throw std::runtime_error("missing tree " + s);
    };
    const auto chain = tree_term(by_shape("(x(xx))"), enh.X, dt);
    const auto bal = tree_term(by_shape("((xx)(xx))"), enh.X, dt);
    const auto c3 = tree_term(by_shape("(x(x(xx)))"), enh.X, dt);
    for (std::size_t i = 0; i < enh.X.size(); ++i) {
        CHECK(testutil::max_abs_diff(chain[i], enh.chain[i]) < 1e-13);
        CHECK(testutil::max_abs_diff(bal[i], enh.balanced[i]) < 1e-13);
        CHECK(testutil::max_abs_diff(c3[i], enh.chain3[i]) < 1e-13);
    }
    const auto part = build_partition(g);
    CHECK(testutil::max_abs_diff(enh.res_Q[10], resonant(enh.Q[10], enh.X[10], part)) < 1e-14);
}

TEST_CASE("sbe paracontrolled solver closes on the Galerkin scheme") {
    const TorusGrid g(1, 64);
    const auto part = build_partition(g);
    const double dt = 0.005, T = 0.1;
    const auto noise = sbe_noise(g, 8, dt, std::size_t(std::lround(T / dt)), 7, 0);
    const auto G = sbe_increments(noise);
    const auto u0 = smooth_initial(g);
    const auto gal = solve_sbe_galerkin(G, dt, u0);
    const auto enh = build_sbe_enhancement(G, dt, 8, part);

    SbeOptions opt;
    opt.scheme = SbeScheme::ExpEuler;
    const auto pc = solve_sbe_paracontrolled(enh, u0, part, opt);
    REQUIRE(pc.path.size() == gal.size());
    for (std::size_t i = 0; i < gal.size(); ++i) CHECK(testutil::max_abs_diff(pc.path[i].u, gal[i]) < 1e-11);
    CHECK(pc.ansatz_defect < 1e-12);

    // zero forcing and zero data stay at zero
    const auto quiet = build_sbe_enhancement(std::vector<SpectralField>(G.size(), SpectralField(g)), dt, 8, part);
    const auto z = solve_sbe_paracontrolled(quiet, SpectralField(g), part);
    CHECK(testutil::max_abs(z.path.back().u) == 0.0);
    CHECK_THROWS_AS(solve_sbe_paracontrolled(enh, SpectralField(TorusGrid(1, 32)), part), StructuralError);
}

TEST_CASE("sbe second-order scheme against Galerkin under refinement") {
    const TorusGrid g(1, 128);
    const auto part = build_partition(g);
    const double T = 0.25, dt_fine = T / 400;
    const auto noise = sbe_noise(g, 8, dt_fine, 400, 11, 0);
    const auto fine = sbe_increments(noise);
    const auto u0 = smooth_initial(g);
    std::vector<double> h, e;
    for (int k : {8, 4, 2}) {
        const double dt = dt_fine * k;
        const auto G = coarsen_increments(fine, dt_fine, k);
        const auto gal = solve_sbe_galerkin(G, dt, u0);
        const auto pc = solve_sbe_paracontrolled(build_sbe_enhancement(G, dt, 8, part), u0, part);
        REQUIRE_FALSE(pc.exploded);
        h.push_back(dt);
        e.push_back(relative_l2(pc.path.back().u, gal.back()));
    }
    MESSAGE("discrepancy " << e[0] << " " << e[1] << " " << e[2]);
    CHECK(e.back() <= 5e-2);
    for (std::size_t i = 1; i < e.size(); ++i) CHECK(e[i] < e[i - 1]);
    CHECK(loglog_slope(h, e) > 0.7);
}

TEST_CASE("sbe tree expansion residual") {
    const TorusGrid g(1, 64);
    const double dt = 0.01, T = 0.25;
    const auto noise = sbe_noise(g, 8, dt, std::size_t(std::lround(T / dt)), 13, 0);
    const auto G = sbe_increments(noise);
    const auto X = ou_path(G, dt);
    const SpectralField zero(g);
    for (int order : {1, 2, 3, 4}) {
        const auto expansion = truncated_tree_expansion(X, dt, order);
        std::vector<double> lam, res;
        for (double l : {0.5, 0.25, 0.125}) {
            const auto gal = solve_sbe_galerkin(sbe_increments(noise, l), dt, zero);
            // a tree of degree d scales as λ^{d+1}
            SpectralField s(g);
            for (const auto& t : enumerate_trees(order - 1)) {
                const auto term = tree_term(*t, X, dt);
                s.axpy(t->count * std::pow(l, t->degree + 1), term.back());
            }
            lam.push_back(l);
            res.push_back(l2_norm(gal.back() - s));
        }
        CHECK(loglog_slope(lam, res) == doctest::Approx(order + 1).epsilon(0.3 / (order + 1)));
        if (order == 1) CHECK(testutil::max_abs_diff(expansion.back(), X.back()) == 0.0);
    }
    CHECK_THROWS_AS(truncated_tree_expansion(X, dt, 5), ArgumentError);
}

TEST_CASE("sbe regularity ladder across mollification levels") {
    const TorusGrid g(1, 256);
    const auto part = build_partition(g);
    const double gm = 0.4;
    const double alpha[4] = {gm - 1, 2 * gm - 1, gm, 2 * gm};
    const int R = 4;
    std::vector<std::array<double, 4>> norms;
    std::vector<std::array<double, 4>> low;  // block j = 1
    for (int n : {8, 16, 32}) {
        std::array<double, 4> a{}, b{};
        for (int r = 0; r < R; ++r) {
            const auto e = build_sbe_enhancement(21, r, n, g, 5e-4, 0.25);
            const FieldPath* p[4] = {&e.X, &e.cherry, &e.chain, &e.balanced};
            for (int t = 0; t < 4; ++t) {
                a[t] += besov_norm(p[t]->back(), alpha[t], kInf, kInf, part) / R;
                b[t] += block_norms(p[t]->back(), part, kInf)[2] / R;
            }
        }
        norms.push_back(a);
        low.push_back(b);
    }
    for (int t = 0; t < 4; ++t)
        MESSAGE("tree " << t << " ratios " << norms[1][t] / norms[0][t] << " " << norms[2][t] / norms[1][t]);
    CHECK(norms[1][0] / norms[0][0] <= 1.3);
    CHECK(norms[1][1] / norms[0][1] <= 1.3);
    // low-frequency blocks settle as n grows
    for (int t = 0; t < 4; ++t) CHECK(std::abs(low[2][t] - low[1][t]) < std::abs(low[1][t] - low[0][t]));
}
