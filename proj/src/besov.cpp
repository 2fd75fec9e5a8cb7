#include "parapde/besov.hpp"
#include "parapde/errors.hpp"
#include "parapde/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace parapde {
namespace {

double smooth_step(double t, double p) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-p / t), b = std::exp(-p / (1.0 - t));
    return a / (a + b);
}

}  // namespace

double partition_chi(double r, double profile) {
    constexpr double lo = 0.75, hi = 4.0 / 3.0;
    return 1.0 - smooth_step((r - lo) / (hi - lo), profile);
}

double partition_rho(double r, double profile) {
    return partition_chi(0.5 * r, profile) - partition_chi(r, profile);
}

DyadicPartition build_partition(const TorusGrid& g, double profile) {
    if (g.modes() < 8) throw ConfigurationError("partition needs at least 8 modes per axis");
    if (!(profile > 0.0)) throw ArgumentError("partition profile must be positive");
    DyadicPartition p;
    p.grid = g;
    p.profile = profile;
    int J = 0;
    while (0.75 * std::ldexp(1.0, J + 1) <= g.modes() / 2.0) ++J;
    double kmax = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!g.nyquist(i)) kmax = std::max(kmax, g.knorm(i));
    while (0.75 * std::ldexp(1.0, J + 1) < kmax) ++J;
    p.j_max = J;
    p.mult.assign(J + 2, std::vector<double>(g.size(), 0.0));
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.nyquist(i)) continue;
        const double r = g.knorm(i);
        p.mult[0][i] = partition_chi(r, profile);
        for (int j = 0; j <= J; ++j) p.mult[j + 1][i] = partition_rho(std::ldexp(r, -j), profile);
    }
    return p;
}

std::string partition_csv(const DyadicPartition& p) {
    std::ostringstream os;
    os.precision(17);
    os << "j,k,value\n";
    for (int j = -1; j <= p.j_max; ++j)
        for (std::size_t i = 0; i < p.grid.size(); ++i) {
            const double v = p.value(j, i);
            if (v == 0.0) continue;
            const auto k = p.grid.mode(i);
            os << j << ',';
            for (int a = 0; a < p.grid.dim(); ++a) os << (a ? ":" : "") << k[a];
            os << ',' << v << '\n';
        }
    return os.str();
}

SpectralField block(const SpectralField& f, const DyadicPartition& p, int j) {
    if (f.grid() != p.grid) throw StructuralError("block: partition built for another grid");
    if (j < -1 || j > p.j_max) return SpectralField(f.grid(), f.real());
    SpectralField out(f.grid(), f.real());
    kernels::active().scale(out.coeffs().data(), f.coeffs().data(), p.mult[j + 1].data(), f.size());
    return out;
}

SpectralField low_part(const SpectralField& f, const DyadicPartition& p, int j) {
    SpectralField out(f.grid(), f.real());
    for (int i = -1; i <= std::min(j - 1, p.j_max); ++i) out += block(f, p, i);
    return out;
}

SpectralField BlockDecomposition::sum() const {
    SpectralField out(blocks.front().grid(), blocks.front().real());
    for (const auto& b : blocks) out += b;
    return out;
}

BlockDecomposition decompose(const SpectralField& f, const DyadicPartition& p) {
    BlockDecomposition d;
    for (int j = -1; j <= p.j_max; ++j) d.blocks.push_back(block(f, p, j));
    return d;
}

double lp_norm(const SpectralField& f, double p) {
    const auto v = inverse_complex(f);
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& x : v) m = std::max(m, f.real() ? std::abs(x.real()) : std::abs(x));
        return m;
    }
    double s = 0.0;
    for (const auto& x : v) s += std::pow(f.real() ? std::abs(x.real()) : std::abs(x), p);
    return std::pow(s * f.grid().cell_volume(), 1.0 / p);
}

std::vector<double> block_norms(const SpectralField& f, const DyadicPartition& part, double p) {
    std::vector<double> out;
    for (int j = -1; j <= part.j_max; ++j) out.push_back(lp_norm(block(f, part, j), p));
    return out;
}

double besov_norm(const SpectralField& f, double alpha, double p, double q, const DyadicPartition& part) {
    const auto n = block_norms(f, part, p);
    double acc = 0.0;
    for (int j = -1; j <= part.j_max; ++j) {
        const double t = std::pow(2.0, j * alpha) * n[j + 1];
        if (std::isinf(q)) acc = std::max(acc, t);
        else acc += std::pow(t, q);
    }
    return std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
}

namespace {

enum Parts : unsigned { kLess = 1, kGreater = 2, kResonant = 4 };

// All requested pieces from the blocks of f and g evaluated on one padded grid.
Paraproducts bony(const SpectralField& f, const SpectralField& g, const DyadicPartition& p, unsigned want) {
    require_same_grid(f, g, "paraproduct");
    if (f.grid() != p.grid) throw StructuralError("paraproduct: partition built for another grid");
    const auto& grid = f.grid();
    const bool real = f.real() && g.real();
    Paraproducts out{SpectralField(grid, real), SpectralField(grid, real), SpectralField(grid, real)};
    const int bf = band_limit(f), bg = band_limit(g);
    if (bf < 0 || bg < 0) return out;
    const int R = std::min(grid.max_mode(), bf + bg);
    int P = std::max(required_padding(bf, bg, R), grid.modes());
    while (true) {
        int n = P;
        for (int q : {2, 3, 5})
            while (n % q == 0) n /= q;
        if (n == 1) break;
        P += 2;
    }
    const int nb = p.blocks();
    std::vector<std::vector<cplx>> F(nb), G(nb);
    for (int b = 0; b < nb; ++b) {
        F[b] = to_padded(block(f, p, b - 1), P);
        G[b] = to_padded(block(g, p, b - 1), P);
    }
    const std::size_t n = F[0].size();
    const auto& K = kernels::active();
    auto finish = [&](std::vector<cplx>& acc, SpectralField& dst) { dst = from_padded(grid, acc, P, real); };

    if (want & kLess) {
        std::vector<cplx> acc(n), S(n);
        // S accumulates S_{j−1} f = Σ_{i ≤ j−2} Δ_i f
        for (int j = -1; j <= p.j_max; ++j) {
            if (j - 2 >= -1) K.axpy(S.data(), 1.0, F[j - 2 + 1].data(), n);
            if (j >= 1) K.mul_acc(acc.data(), S.data(), G[j + 1].data(), n);
        }
        finish(acc, out.less);
    }
    if (want & kGreater) {
        std::vector<cplx> acc(n), S(n);
        for (int i = -1; i <= p.j_max; ++i) {
            if (i - 2 >= -1) K.axpy(S.data(), 1.0, G[i - 2 + 1].data(), n);
            if (i >= 1) K.mul_acc(acc.data(), F[i + 1].data(), S.data(), n);
        }
        finish(acc, out.greater);
    }
    if (want & kResonant) {
        std::vector<cplx> acc(n), W(n);
        for (int j = -1; j <= p.j_max; ++j) {
            std::fill(W.begin(), W.end(), cplx(0.0));
            for (int i = std::max(-1, j - 1); i <= std::min(p.j_max, j + 1); ++i)
                K.axpy(W.data(), 1.0, G[i + 1].data(), n);
            K.mul_acc(acc.data(), F[j + 1].data(), W.data(), n);
        }
        finish(acc, out.resonant);
    }
    return out;
}

}  // namespace

Paraproducts paraproduct_decompose(const SpectralField& f, const SpectralField& g, const DyadicPartition& p) {
    return bony(f, g, p, kLess | kGreater | kResonant);
}

SpectralField para_less(const SpectralField& f, const SpectralField& g, const DyadicPartition& p) {
    return bony(f, g, p, kLess).less;
}

SpectralField resonant(const SpectralField& f, const SpectralField& g, const DyadicPartition& p) {
    return bony(f, g, p, kResonant).resonant;
}

SpectralField commutator_C(const SpectralField& f, const SpectralField& g, const SpectralField& h,
                           const DyadicPartition& p) {
    return resonant(para_less(f, g, p), h, p) - dealiased_product(f, resonant(g, h, p));
}

Nonlinearity linear_nonlinearity() {
    return {"linear", [](double x) { return x; }, [](double) { return 1.0; }, [](double) { return 0.0; }};
}

Nonlinearity sine_nonlinearity(double a) {
    return {"sine:" + std::to_string(a), [a](double x) { return a * std::sin(x); },
            [a](double x) { return a * std::cos(x); }, [a](double x) { return -a * std::sin(x); }};
}

Nonlinearity square_nonlinearity() {
    return {"square", [](double x) { return x * x; }, [](double x) { return 2.0 * x; },
            [](double) { return 2.0; }};
}

Nonlinearity constant_nonlinearity(double c) {
    return {"constant", [c](double) { return c; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
}

Nonlinearity zero_nonlinearity() { return constant_nonlinearity(0.0); }

SpectralField apply_pointwise(const SpectralField& f, const std::function<double(double)>& F) {
    const auto& g = f.grid();
    const int P = 2 * g.modes();
    auto v = to_padded(f, P);
    for (auto& x : v) x = F(x.real());
    return from_padded(g, v, P, true);
}

SpectralField paralinearize(const Nonlinearity& F, const SpectralField& f, const DyadicPartition& p) {
    return apply_pointwise(f, F.f) - para_less(apply_pointwise(f, F.df), f, p);
}

}  // namespace parapde
