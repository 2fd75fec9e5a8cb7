#include "common.hpp"

#include "parapde/besov.hpp"
#include "parapde/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace parapde;
using testutil::max_abs;
using testutil::max_abs_diff;

TEST_CASE("partition of unity and supports") {
    for (int dim : {1, 2, 3}) {
        for (int M : {8, 16, 64}) {
            if (dim == 3 && M > 16) continue;
            TorusGrid g(dim, M);
            auto p = build_partition(g);
            for (std::size_t i = 0; i < g.size(); ++i) {
                if (g.nyquist(i)) continue;
                double s = 0.0;
                for (int j = -1; j <= p.j_max; ++j) {
                    const double v = p.value(j, i);
                    CHECK(v >= 0.0);
                    CHECK(v <= 1.0);
                    s += v;
                }
                CHECK(std::abs(s - 1.0) < 1e-12);
                for (int j = 1; j <= p.j_max; ++j) CHECK(p.value(-1, i) * p.value(j, i) == 0.0);
                for (int a = 0; a <= p.j_max; ++a)
                    for (int b = a + 2; b <= p.j_max; ++b) CHECK(p.value(a, i) * p.value(b, i) == 0.0);
                const double r = g.knorm(i);
                if (r >= 2.0) CHECK(p.value(-1, i) == 0.0);
                if (std::abs(r - 1.0) < 1e-15)
                    for (int j = 2; j <= p.j_max; ++j) CHECK(p.value(j, i) == 0.0);
            }
        }
    }
    CHECK_THROWS_AS(build_partition(TorusGrid(1, 6)), ConfigurationError);
}

TEST_CASE("radial profile geometry") {
    CHECK(partition_chi(0.75) == 1.0);
    CHECK(partition_chi(4.0 / 3.0) == 0.0);
    CHECK(partition_rho(0.75) == 0.0);
    CHECK(partition_rho(8.0 / 3.0) == 0.0);
    CHECK(partition_rho(2.0) > 0.0);
    for (double r = 0.0; r < 3.0; r += 0.01) CHECK(partition_chi(r) + partition_rho(r) == doctest::Approx(partition_chi(r / 2.0)));
}

TEST_CASE("blocks reconstruct and have exact support") {
    std::mt19937_64 rng(21);
    TorusGrid g(2, 32);
    auto p = build_partition(g);
    auto f = testutil::random_field(g, g.max_mode(), rng);
    auto d = decompose(f, p);
    CHECK(max_abs_diff(d.sum(), f) <= 1e-12 * max_abs(f));
    for (int j = -1; j <= p.j_max; ++j)
        for (std::size_t i = 0; i < g.size(); ++i)
            if (p.value(j, i) == 0.0) CHECK(d.at(j)[i] == 0.0);
    CHECK(max_abs_diff(low_part(f, p, p.j_max + 1), f) <= 1e-12 * max_abs(f));
}

TEST_CASE("besov norm examples") {
    TorusGrid g(1, 64);
    auto p = build_partition(g);
    CHECK(besov_norm(SpectralField(g), 0.5, kInf, kInf, p) == 0.0);

    // Single pair ±k inside one block: Δ_j f is a scaled cosine whose lattice sup is attained at x = 0.
    const int k = 5;
    const cplx a(0.8, 0.0);
    SpectralField f(g);
    f.set({k, 0, 0}, a);
    f.set({-k, 0, 0}, a);
    const double alpha = 0.3;
    double expect = 0.0;
    for (int j = -1; j <= p.j_max; ++j) {
        const double rho = p.value(j, g.flat({k, 0, 0}));
        expect = std::max(expect, std::pow(2.0, j * alpha) * 2.0 * std::abs(a) * rho / std::sqrt(kTwoPi));
    }
    CHECK(besov_norm(f, alpha, kInf, kInf, p) == doctest::Approx(expect).epsilon(1e-12));

    std::mt19937_64 rng(7);
    auto r = testutil::random_field(g, 31, rng);
    CHECK(besov_norm(r, -0.5, kInf, kInf, p) <= besov_norm(r, 0.2, kInf, kInf, p));
    CHECK(besov_norm(r, 0.0, 2.0, 2.0, p) > 0.0);
}

TEST_CASE("dirac delta lies in C^{-d}") {
    for (int dim : {1, 2}) {
        TorusGrid g(dim, dim == 1 ? 1024 : 128);
        auto p = build_partition(g);
        SpectralField delta(g);
        for (std::size_t i = 0; i < g.size(); ++i)
            if (!g.nyquist(i)) delta[i] = std::pow(kTwoPi, -0.5 * dim);
        const auto n = block_norms(delta, p, kInf);
        double lo = 1e300, hi = 0.0;
        for (int j = 0; j <= p.j_max; ++j) {
            if (std::ldexp(8.0 / 3.0, j) > g.max_mode()) continue;  // annulus cut by the band
            const double r = n[j + 1] / std::pow(2.0, j * dim);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        CHECK(hi / lo <= 2.0);
    }
}

TEST_CASE("bony decomposition equals the product") {
    std::mt19937_64 rng(31);
    for (int dim : {1, 2}) {
        TorusGrid g(dim, 16);
        auto p = build_partition(g);
        for (int rep = 0; rep < 4; ++rep) {
            auto f = testutil::random_field(g, 7, rng);
            auto h = testutil::random_field(g, 7, rng);
            auto d = paraproduct_decompose(f, h, p);
            auto sum = d.less + d.greater + d.resonant;
            auto oracle = testutil::brute_product(f, h);
            CHECK(max_abs_diff(sum, oracle) <= 1e-12 * max_abs(oracle));
            CHECK(max_abs_diff(d.less, para_less(f, h, p)) <= 1e-13 * max_abs(oracle));
            CHECK(max_abs_diff(d.resonant, resonant(f, h, p)) <= 1e-13 * max_abs(oracle));
            auto swapped = paraproduct_decompose(h, f, p);
            CHECK(max_abs_diff(swapped.less, d.greater) <= 1e-13 * max_abs(oracle));
        }
    }
}

TEST_CASE("paraproduct support bookkeeping") {
    TorusGrid g(1, 64);
    auto p = build_partition(g);
    SpectralField slow(g), fast(g);
    slow[0] = 0.4;
    slow.set({1, 0, 0}, cplx(0.2, 0.1));
    slow.set({-1, 0, 0}, cplx(0.2, -0.1));
    fast.set({12, 0, 0}, cplx(0.3, 0.5));
    fast.set({-12, 0, 0}, cplx(0.3, -0.5));
    auto d = paraproduct_decompose(slow, fast, p);
    CHECK(max_abs(d.resonant) < 1e-14);
    CHECK(max_abs(d.greater) < 1e-14);
    CHECK(max_abs_diff(d.less, dealiased_product(slow, fast)) < 1e-14);

    std::mt19937_64 rng(2);
    auto f = testutil::random_field(g, 31, rng);
    auto h = testutil::random_field(g, 31, rng);
    for (int j = 1; j <= p.j_max; ++j) {
        auto term = dealiased_product(low_part(f, p, j - 1), block(h, p, j));
        // |ℓ| ≤ (4/3)2^{j−2}·2 for S_{j−1}, |m| ≥ (3/4)2^j: sum ≥ 2^j (3/4 − 2/3)
        const double inner = std::ldexp(0.75 - 2.0 / 3.0, j);
        const double outer = std::ldexp(8.0 / 3.0 + 2.0 / 3.0, j);
        for (std::size_t i = 0; i < g.size(); ++i)
            if (g.knorm(i) < inner || g.knorm(i) > outer) CHECK(std::abs(term[i]) < 1e-13);
    }
}

TEST_CASE("constant paraproduct") {
    std::mt19937_64 rng(9);
    TorusGrid g(2, 16);
    auto p = build_partition(g);
    auto h = testutil::random_field(g, 7, rng);
    auto d = paraproduct_decompose(constant_field(g, 1.7), h, p);
    CHECK(max_abs_diff(d.less + d.greater + d.resonant, 1.7 * h) <= 1e-12 * max_abs(h));
    SpectralField expect(g);
    for (int j = 1; j <= p.j_max; ++j) expect += block(h, p, j);
    CHECK(max_abs_diff(d.less, 1.7 * expect) <= 1e-12 * max_abs(h));
}

TEST_CASE("commutator") {
    std::mt19937_64 rng(13);
    TorusGrid g(1, 128);
    auto p = build_partition(g);
    // g∘h supported at high modes only.
    SpectralField a(g), b(g);
    a.set({20, 0, 0}, cplx(0.5, 0.2));
    a.set({-20, 0, 0}, cplx(0.5, -0.2));
    b.set({22, 0, 0}, cplx(0.1, 0.3));
    b.set({-22, 0, 0}, cplx(0.1, -0.3));
    auto c = commutator_C(constant_field(g, 2.0), a, b, p);
    CHECK(max_abs(c) < 1e-12);
    auto f = testutil::random_field(g, 20, rng);
    CHECK(max_abs(commutator_C(f, SpectralField(g), b, p)) == 0.0);
    auto h1 = testutil::random_field(g, 20, rng);
    auto h2 = testutil::random_field(g, 20, rng);
    auto lin = commutator_C(f, a, 2.0 * h1 + h2, p);
    auto ref = 2.0 * commutator_C(f, a, h1, p) + commutator_C(f, a, h2, p);
    CHECK(max_abs_diff(lin, ref) <= 1e-11 * (1.0 + max_abs(ref)));
}

TEST_CASE("paralinearization") {
    std::mt19937_64 rng(17);
    TorusGrid g(1, 16);
    auto p = build_partition(g);
    auto f = testutil::random_field(g, 4, rng);
    auto rid = paralinearize(linear_nonlinearity(), f, p);
    auto one_less = para_less(constant_field(g, 1.0), f, p);
    CHECK(max_abs_diff(rid + one_less, f) <= 1e-12 * max_abs(f));

    auto rc = paralinearize(constant_nonlinearity(0.3), f, p);
    CHECK(max_abs_diff(rc, constant_field(g, 0.3)) < 1e-13);

    SpectralField s(g);
    s.set({3, 0, 0}, cplx(0.6, 0.1));
    s.set({-3, 0, 0}, cplx(0.6, -0.1));
    auto rsq = paralinearize(square_nonlinearity(), s, p);
    auto direct = testutil::brute_product(s, s) - para_less(2.0 * s, s, p);
    CHECK(max_abs_diff(rsq, direct) < 1e-13);
}
