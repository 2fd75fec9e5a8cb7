#include "parapde/renorm.hpp"
#include "parapde/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

namespace parapde {
namespace {

double unit_sphere_area(int d) {
    switch (d) {
    case 1: return 2.0;
    case 2: return kTwoPi;
    case 3: return 2.0 * kTwoPi;
    default: throw ArgumentError("dimension must be 1, 2 or 3");
    }
}

// Visits k ∈ ℤ^d with |k|_∞ ≤ K shell by shell (ascending |k|_∞), each shell in lexicographic order.
template <class Fn>
void for_each_shell(int d, int K, Fn&& fn) {
    for (int r = 0; r <= K; ++r) {
        if (d == 1) {
            if (r == 0) fn(std::array<int, 3>{0, 0, 0});
            else {
                fn(std::array<int, 3>{-r, 0, 0});
                fn(std::array<int, 3>{r, 0, 0});
            }
        } else if (d == 2) {
            for (int a = -r; a <= r; ++a) {
                const int step = (std::abs(a) == r || r == 0) ? 1 : 2 * r;
                for (int b = -r; b <= r; b += step) fn(std::array<int, 3>{a, b, 0});
            }
        } else {
            for (int a = -r; a <= r; ++a)
                for (int b = -r; b <= r; ++b) {
                    const int step = (std::abs(a) == r || std::abs(b) == r || r == 0) ? 1 : 2 * r;
                    for (int c = -r; c <= r; c += step) fn(std::array<int, 3>{a, b, c});
                }
        }
    }
}

double norm2(const std::array<int, 3>& k) { return double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2]; }

}  // namespace

double gaussian_lattice_tail(double t, int K, int d) {
    // Each omitted point owns a unit cell inside {|x| > K + 1/2 − c}, c = √d/2, on which
    // e^{−t|k|²} ≤ e^{−t(|x| − c)²}; integrate radially from a = K + 1/2 − 2c.
    const double c = 0.5 * std::sqrt(double(d));
    const double a = K + 0.5 - 2.0 * c;
    if (a <= 0.0) return kInf;
    const double w = unit_sphere_area(d);
    const double e = std::exp(-t * a * a);
    const double g0 = 0.5 * std::sqrt(kPi / t) * std::erfc(a * std::sqrt(t));  // ∫_a^∞ e^{−ts²}
    const double g1 = e / (2.0 * t);                                           // ∫_a^∞ s e^{−ts²}
    const double g2 = a * e / (2.0 * t) + g0 / (2.0 * t);                      // ∫_a^∞ s² e^{−ts²}
    switch (d) {
    case 1: return w * g0;
    case 2: return w * (g1 + c * g0);
    default: return w * (g2 + 2.0 * c * g1 + c * c * g0);
    }
}

SumResult heat_trace_gt(double t, int K) {
    if (!(t > 0.0)) throw ArgumentError("heat_trace_gt: t must be positive");
    if (K < 1) throw ArgumentError("heat_trace_gt: cutoff must be positive");
    double s = 0.0;
    for_each_shell(2, K, [&](const std::array<int, 3>& k) { s += std::exp(-t * norm2(k)); });
    const double c = 1.0 / (kTwoPi * kTwoPi);
    return {c * s, c * gaussian_lattice_tail(t, K, 2), K, 2};
}

int heat_trace_cutoff(double t) { return static_cast<int>(std::ceil(std::sqrt(40.0 / t))) + 2; }

double integrated_heat_trace(double delta, double T) {
    if (!(delta > 0.0) || !(T > delta)) throw ArgumentError("integrated_heat_trace: need 0 < δ < T");
    auto integrand = [](double u) {
        const double s = std::exp(u);
        return s * heat_trace_gt(s, heat_trace_cutoff(s)).value;
    };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, std::log(delta),
                                                                        std::log(T), 12, 1e-13);
}

int counterterm_cutoff(int n) { return 8 * n + 8; }

SumResult pam_counterterm_fn(double t, int n, int K, const Mollifier& m, double variance) {
    if (t < 0.0) throw ArgumentError("pam_counterterm_fn: t must be nonnegative");
    if (n <= 0) throw ArgumentError("pam_counterterm_fn: n must be positive");
    double s = 0.0;
    for_each_shell(2, K, [&](const std::array<int, 3>& k) {
        const double q = norm2(k);
        if (q == 0.0) return;
        const double h = m.hat(std::sqrt(q) / n);
        s += h * h / q * -std::expm1(-t * q);
    });
    const double c = variance / (kTwoPi * kTwoPi);
    // Gaussian profile: summand ≤ e^{−|k|²/n²}/(K+1)² outside the cutoff.
    const double tail = m.name == "gaussian" ? gaussian_lattice_tail(1.0 / (double(n) * n), K, 2) /
                                                   ((K + 1.0) * (K + 1.0))
                                             : kInf;
    return {c * (s + t), c * tail, K, 2};
}

SigmaResult sigma_sq_limit(const RadialProfile& rtilde, double beta, int d) {
    if (beta <= 2.0) return {false, kInf, 0.0};
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    // ∫_0^1 r^{β−3} R̃ dr with r = v^{1/(β−2)} becomes (β−2)^{−1} ∫_0^1 R̃(v^{1/(β−2)}) dv.
    double e1 = 0.0, e2 = 0.0;
    const double p = 1.0 / (beta - 2.0);
    const double inner = p * GK::integrate([&](double v) { return rtilde.f(std::pow(v, p)); }, 0.0, 1.0, 15,
                                           1e-14, &e1);
    const double outer = GK::integrate([&](double r) { return std::pow(r, beta - 3.0) * rtilde.f(r); }, 1.0,
                                       std::numeric_limits<double>::infinity(), 15, 1e-14, &e2);
    const double c = std::pow(kTwoPi, -0.5 * d) * unit_sphere_area(d);
    return {true, c * (inner + outer), c * (p * e1 + e2)};
}

SumResult sigma_sq_eps(double t, const PotentialParams& p, int d, int K) {
    validate_potential(p, d);
    double s = 0.0;
    for_each_shell(d, K, [&](const std::array<int, 3>& k) {
        const double q = norm2(k);
        if (q == 0.0) return;
        const double w = -std::expm1(-t * q);
        s += w * w / q * potential_spectrum(p, d, p.eps * std::sqrt(q));
    });
    const double c = std::pow(kTwoPi, -0.5 * d) * std::pow(p.eps, d - 2.0 * p.alpha);
    double tail = kInf;
    if (p.rtilde.name == "gaussian") {
        // Outside the cutoff: 1/|m|² ≤ 1/(K+1)², |εm|^{β−d} ≤ (ε(K+1))^{β−d}, R̃ = e^{−ε²|m|²/2}.
        const double pre = std::pow(p.eps * (K + 1.0), p.beta - d) / ((K + 1.0) * (K + 1.0));
        tail = pre * gaussian_lattice_tail(0.5 * p.eps * p.eps, K, d);
    }
    return {c * s, c * tail, K, d};
}

double potential_block_covariance(int i, int j, const PotentialParams& p, int d) {
    validate_potential(p, d);
    auto rho = [&](int blk, double r) {
        return blk < 0 ? partition_chi(r) : partition_rho(std::ldexp(r, -blk));
    };
    const int K = static_cast<int>(std::ceil(std::ldexp(8.0 / 3.0, std::max({i, j, 0})))) + 1;
    double s = 0.0;
    for_each_shell(d, K, [&](const std::array<int, 3>& k) {
        const double q = norm2(k);
        if (q == 0.0) return;
        const double r = std::sqrt(q);
        const double w = rho(i, r) * rho(j, r);
        if (w != 0.0) s += w * potential_spectrum(p, d, p.eps * r);
    });
    return std::pow(kTwoPi, -0.5 * d) * std::pow(p.eps, d - 2.0 * p.alpha) * s;
}

double potential_block_variance(int i, const PotentialParams& p, int d) {
    return potential_block_covariance(i, i, p, d);
}

double ou_square_variance_partial(int k, double t, int N) {
    if (k == 0) throw ArgumentError("ou_square_variance_partial: k must be nonzero");
    if (t < 0.0) throw ArgumentError("ou_square_variance_partial: t must be nonnegative");
    double s = 0.0;
    for (int l = -N; l <= N; ++l) {
        const int m = k - l;
        if (std::abs(m) > N) continue;
        s += -std::expm1(-2.0 * double(l) * l * t) * -std::expm1(-2.0 * double(m) * m * t);
    }
    return 0.5 * s;
}

double resonance_sum(int k, int N) {
    if (k == 0) throw ArgumentError("resonance_sum: k must be nonzero");
    double s = 0.0;
    for (int l = -N; l <= N; ++l) {
        const int m = k - l;
        if (std::abs(m) > N) continue;
        s += 1.0 / (double(l) * l + double(m) * m);
    }
    return s;
}

double gradient_square_variance_bound(int q, const PotentialParams& p, int d) {
    const auto sig = sigma_sq_limit(p.rtilde, p.beta, d);
    if (!sig.finite) return kInf;
    const double s2 = sig.value;
    const double alt = std::pow(std::ldexp(p.eps, q), p.beta - 2.0) * p.rtilde.sup * s2;
    return std::pow(p.eps, 4.0 - 4.0 * p.alpha) * std::min(s2 * s2, alt);
}

SpectralField potential_heat_integral(const SpectralField& V, double t) {
    const auto& g = V.grid();
    SpectralField X(g);
    for (std::size_t i = 0; i < X.size(); ++i) {
        const double q = g.k2(i);
        X[i] = q == 0.0 ? t * V[i] : -std::expm1(-t * q) / q * V[i];
    }
    return X;
}

SpectralField gradient_square(const SpectralField& X) {
    const auto& g = X.grid();
    SpectralField out(g);
    for (int a = 0; a < g.dim(); ++a) {
        const auto dX = derivative(X, a);
        out += dealiased_product(dX, dX);
    }
    return out;
}

double gradient_square_block_variance(int q, double t, const PotentialParams& p, const TorusGrid& g) {
    validate_potential(p, g.dim());
    const int d = g.dim();
    // ∂_a X(x) = Σ_m i m_a A(m) g(m) e^{im·x}/(2π)^{d/2} with E|g|² = 1 and
    // A(m) = (2π)^{d/4} ε^{d/2−α} √R(εm)(1 − e^{−t|m|²})/|m|².
    // Var Δ_q|∇X|²(x) = 2 (2π)^{−2d} Σ_{m,m'} (m·m')² A(m)²A(m')² ρ_q(m+m')²
    //                 = 2 (2π)^{−2d} Σ_{a,b} Σ_p ρ_q(p)² (h_ab ∗ h_ab)(p),  h_ab(m) = m_a m_b A(m)².
    const auto part = build_partition(g);
    const int B = g.max_mode();
    // A(m) must vanish beyond half the band so the convolution stays on the grid.
    std::vector<double> A2(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double kq = g.k2(i);
        if (kq == 0.0 || g.nyquist(i) || g.kinf(i) > B / 2) continue;
        const double w = -std::expm1(-t * kq) / kq;
        A2[i] = std::pow(kTwoPi, 0.5 * d) * std::pow(p.eps, d - 2.0 * p.alpha) *
                potential_spectrum(p, d, p.eps * std::sqrt(kq)) * w * w;
    }
    double total = 0.0;
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) {
            SpectralField h(g);
            for (std::size_t i = 0; i < g.size(); ++i) h[i] = g.kcomp(a, i) * g.kcomp(b, i) * A2[i];
            // dealiased_product carries (2π)^{−d/2}; undo it to get the bare convolution.
            const auto conv = dealiased_product(h, h);
            double s = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double r = part.value(q, i);
                if (r != 0.0) s += r * r * conv[i].real();
            }
            total += (a == b ? 1.0 : 2.0) * s * std::pow(kTwoPi, 0.5 * d);
        }
    return 2.0 * std::pow(kTwoPi, -2.0 * d) * total;
}

}  // namespace parapde
