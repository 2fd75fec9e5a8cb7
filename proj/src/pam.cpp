#include "parapde/pam.hpp"
#include "parapde/errors.hpp"
#include "parapde/renorm.hpp"

#include <cmath>

namespace parapde {
namespace {

double max_coeff(const SpectralField& f) {
    double m = 0.0;
    for (const auto& c : f.coeffs()) m = std::max(m, std::abs(c));
    return m;
}

double max_coeff_diff(const SpectralField& a, const SpectralField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

void check_enhancement(const PamEnhancement& enh, const SpectralField& u0) {
    if (enh.X.empty()) throw ArgumentError("pam: empty enhancement");
    if (enh.xi.grid().dim() != 2) throw StructuralError("pam: two-dimensional fields only");
    require_same_grid(enh.xi, u0, "pam initial condition");
}

// ETD2 step with Picard iteration on the source; returns the iteration count.
template <class Source>
int etd2_picard(const ExpIntegrator& integ, const SpectralField& u, const SpectralField& s0, Source&& source,
                SpectralField& next, const PamOptions& opt) {
    next = integ.step(u, s0);
    for (int it = 1; it <= opt.picard_max; ++it) {
        SpectralField cand = integ.step2(u, s0, source(next));
        const double d = max_coeff_diff(cand, next);
        next = std::move(cand);
        if (d <= opt.picard_tol * (1.0 + max_coeff(next))) return it;
    }
    throw StepError("pam: Picard iteration did not converge; reduce dt");
}

bool exploded(const SpectralField& u, double bound) {
    const double s = sup_norm(u);
    return !std::isfinite(s) || s > bound;
}

}  // namespace

double pam_grid_counterterm(const TorusGrid& g, int n, double t, const Mollifier& m) {
    if (g.dim() != 2) throw StructuralError("pam: two-dimensional grid required");
    return pam_counterterm_fn(t, n, g.max_mode(), m, 1.0).value;
}

SpectralField pam_noise(const TorusGrid& g, int n, std::uint64_t seed, std::uint64_t replica, const Mollifier& m) {
    return mollify(sample_space_white_noise(g, seed, replica, NoiseNormalization::Unit), n, m);
}

SpectralField pam_heat_integral(const SpectralField& xi, double t) {
    const auto& k2 = xi.grid().k2_table();
    SpectralField X(xi.grid());
    for (std::size_t i = 0; i < X.size(); ++i) X[i] = (k2[i] == 0.0 ? t : -std::expm1(-t * k2[i]) / k2[i]) * xi[i];
    return X;
}

PamEnhancement build_pam_enhancement(const SpectralField& xi, int n, const DyadicPartition& part, double dt,
                                     double t_final, bool renormalized, double gamma) {
    if (!(dt > 0.0) || t_final < 0.0) throw ArgumentError("pam: invalid time grid");
    if (xi.grid() != part.grid) throw StructuralError("pam: partition built for another grid");
    PamEnhancement e;
    e.n = n;
    e.gamma = gamma;
    e.dt = dt;
    e.renormalized = renormalized;
    e.xi = xi;
    const long steps = std::lround(t_final / dt);
    for (long i = 0; i <= steps; ++i) {
        const double t = i * dt;
        e.X.push_back(pam_heat_integral(xi, t));
        const double f = renormalized ? pam_grid_counterterm(xi.grid(), n, t) : 0.0;
        e.counter.push_back(f);
        e.resonant.push_back(resonant(e.X.back(), xi, part) - constant_field(xi.grid(), f));
    }
    return e;
}

PamEnhancement build_pam_enhancement(std::uint64_t seed, std::uint64_t replica, int n, const TorusGrid& g,
                                     double dt, double t_final, bool renormalized, double gamma) {
    return build_pam_enhancement(pam_noise(g, n, seed, replica), n, build_partition(g), dt, t_final, renormalized,
                                 gamma);
}

PamSolution solve_pam_direct(const PamEnhancement& enh, const Nonlinearity& F, const SpectralField& u0,
                             const PamOptions& opt) {
    check_enhancement(enh, u0);
    const ExpIntegrator integ(u0.grid(), enh.dt);
    auto FdF = [&](double x) { return F.df(x) * F.f(x); };
    auto source = [&](const SpectralField& u, std::size_t i) {
        SpectralField s = dealiased_product(apply_pointwise(u, F.f), enh.xi);
        if (enh.counter[i] != 0.0) s.axpy(-enh.counter[i], apply_pointwise(u, FdF));
        return s;
    };
    PamSolution out;
    out.u.push_back(u0);
    SpectralField s0 = source(u0, 0);
    for (std::size_t i = 0; i < enh.steps(); ++i) {
        SpectralField next;
        const int it = etd2_picard(integ, out.u.back(), s0, [&](const SpectralField& v) { return source(v, i + 1); },
                                   next, opt);
        out.max_picard = std::max(out.max_picard, it);
        if (exploded(next, opt.blowup)) {
            out.exploded = true;
            out.explosion_time = (i + 1) * enh.dt;
            break;
        }
        s0 = source(next, i + 1);
        out.u.push_back(std::move(next));
    }
    return out;
}

PamSolution solve_pam_linear_transform(const PamEnhancement& enh, const SpectralField& u0, const PamOptions& opt) {
    check_enhancement(enh, u0);
    const auto& g = u0.grid();
    const ExpIntegrator integ(g, enh.dt);
    std::vector<std::array<SpectralField, 2>> grad;
    std::vector<SpectralField> pot;
    for (std::size_t i = 0; i < enh.X.size(); ++i) {
        grad.push_back({derivative(enh.X[i], 0), derivative(enh.X[i], 1)});
        pot.push_back(gradient_square(enh.X[i]) - constant_field(g, enh.counter[i]));
    }
    auto source = [&](const SpectralField& v, std::size_t i) {
        SpectralField s = dealiased_product(pot[i], v);
        for (int a = 0; a < 2; ++a) s.axpy(2.0, dealiased_product(grad[i][a], derivative(v, a)));
        return s;
    };
    const int P = 2 * g.modes();
    auto reconstruct = [&](const SpectralField& v, std::size_t i) {
        const auto x = to_padded(enh.X[i], P);
        auto w = to_padded(v, P);
        for (std::size_t j = 0; j < w.size(); ++j) w[j] = std::exp(x[j].real()) * w[j].real();
        return from_padded(g, w, P, true);
    };
    PamSolution out;
    SpectralField v = u0;
    out.u.push_back(reconstruct(v, 0));
    SpectralField s0 = source(v, 0);
    for (std::size_t i = 0; i < enh.steps(); ++i) {
        SpectralField next;
        const int it = etd2_picard(integ, v, s0, [&](const SpectralField& w) { return source(w, i + 1); }, next, opt);
        out.max_picard = std::max(out.max_picard, it);
        v = std::move(next);
        SpectralField u = reconstruct(v, i + 1);
        if (exploded(u, opt.blowup)) {
            out.exploded = true;
            out.explosion_time = (i + 1) * enh.dt;
            break;
        }
        s0 = source(v, i + 1);
        out.u.push_back(std::move(u));
    }
    return out;
}

ParacontrolledProduct paracontrolled_product(const ParacontrolledState& s, const SpectralField& X,
                                             const SpectralField& xi, const SpectralField& res,
                                             const DyadicPartition& part) {
    const Paraproducts pp = paraproduct_decompose(s.u, xi, part);
    ParacontrolledProduct out;
    out.sharp = resonant(s.sharp, xi, part) + commutator_C(s.uX, X, xi, part) + dealiased_product(s.uX, res);
    out.full = pp.less + pp.greater + out.sharp;
    return out;
}

namespace {

struct SharpTerms {
    SpectralField uX, G, L, T;
};

// Paracontrolled right-hand side at one time level. With F′ = F′(u):
// T = F(u)≻ξ + R_F(u)∘ξ + C(F′, u, ξ) + F′·[C(uX, X, ξ) + uX·Θ + u♯∘ξ], L = uX≺ξ, G = uX≺X.
SharpTerms sharp_terms(const Nonlinearity& F, const SpectralField& u, const SpectralField& uX, const SpectralField& X,
                       const SpectralField& xi, const SpectralField& theta, const DyadicPartition& part) {
    SharpTerms t;
    t.uX = uX;
    t.G = para_less(uX, X, part);
    const SpectralField sharp = u - t.G;
    const Paraproducts pp = paraproduct_decompose(uX, xi, part);
    t.L = pp.less;
    const SpectralField dF = apply_pointwise(u, F.df);
    SpectralField inner = commutator_C(uX, X, xi, part) + dealiased_product(uX, theta) + resonant(sharp, xi, part);
    t.T = pp.greater + resonant(paralinearize(F, u, part), xi, part) + commutator_C(dF, u, xi, part) +
          dealiased_product(dF, inner);
    return t;
}

}  // namespace

ParacontrolledSolution solve_pam_paracontrolled(const PamEnhancement& enh, const Nonlinearity& F,
                                                const SpectralField& u0, const DyadicPartition& part,
                                                const PamOptions& opt) {
    check_enhancement(enh, u0);
    if (u0.grid() != part.grid) throw StructuralError("pam: partition built for another grid");
    const ExpIntegrator integ(u0.grid(), enh.dt);
    ParacontrolledSolution out;
    SpectralField uX = apply_pointwise(u0, F.f);
    SharpTerms cur = sharp_terms(F, u0, uX, enh.X[0], enh.xi, enh.resonant[0], part);
    out.path.push_back({u0, uX, u0 - cur.G});
    for (std::size_t i = 0; i < enh.steps(); ++i) {
        const auto& prev = out.path.back();
        SpectralField guess = integ.step(prev.u, cur.L + cur.T);
        bool done = false;
        for (int it = 1; it <= opt.picard_max; ++it) {
            SharpTerms nxt =
                sharp_terms(F, guess, apply_pointwise(guess, F.f), enh.X[i + 1], enh.xi, enh.resonant[i + 1], part);
            // discrete [ℒ, uX≺]X contribution over the step
            const SpectralField D = nxt.G - integ.step2(cur.G, cur.L, nxt.L);
            SpectralField sharp = integ.step2(prev.sharp, cur.T, nxt.T) - D;
            SpectralField u = nxt.G + sharp;
            const double d = max_coeff_diff(u, guess);
            guess = u;
            if (d <= opt.picard_tol * (1.0 + max_coeff(u))) {
                out.max_picard = std::max(out.max_picard, it);
                if (exploded(u, opt.blowup)) {
                    out.exploded = true;
                    out.explosion_time = (i + 1) * enh.dt;
                    return out;
                }
                ParacontrolledState st{std::move(u), nxt.uX, std::move(sharp)};
                // source terms at the accepted state, with uX kept as stored
                cur = sharp_terms(F, st.u, st.uX, enh.X[i + 1], enh.xi, enh.resonant[i + 1], part);
                out.decomposition_defect = std::max(out.decomposition_defect, max_coeff_diff(st.u, cur.G + st.sharp));
                out.path.push_back(std::move(st));
                done = true;
                break;
            }
        }
        if (!done) throw StepError("pam: Picard iteration did not converge; reduce dt");
    }
    return out;
}

double relative_sup(const SpectralField& a, const SpectralField& b) {
    return sup_norm(a - b) / sup_norm(b);
}

}  // namespace parapde
