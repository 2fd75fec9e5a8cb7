#include "parapde/sbe.hpp"
#include "parapde/burgers.hpp"
#include "parapde/errors.hpp"

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

SpectralField dx_product(const SpectralField& a, const SpectralField& b) {
    return derivative(dealiased_product(a, b), 0);
}

}  // namespace

SbeNoise sbe_noise(const TorusGrid& g, int n, double dt, std::size_t steps, std::uint64_t seed,
                   std::uint64_t replica, const Mollifier&) {
    if (g.dim() != 1) throw StructuralError("sbe: one-dimensional grid required");
    if (!(dt > 0.0)) throw ArgumentError("sbe: dt must be positive");
    SbeNoise z;
    z.n = n;
    z.dt = dt;
    Rng rng(replica_seed(seed, "sbe-noise", replica));
    z.theta.reserve(steps);
    for (std::size_t i = 0; i < steps; ++i) z.theta.push_back(sample_hermitian(g, rng, [](std::size_t) { return 1.0; }));
    return z;
}

std::vector<SpectralField> sbe_increments(const SbeNoise& noise, double lam, const Mollifier& m) {
    std::vector<SpectralField> out;
    if (noise.theta.empty()) return out;
    const auto& g = noise.theta[0].grid();
    const auto moll = mollifier_table(g, noise.n, m);
    std::vector<double> A(g.size(), 0.0);
    for (std::size_t i = 0; i < A.size(); ++i) {
        const double k2 = g.k2(i);
        if (k2 > 0.0) A[i] = lam * moll[i] * std::sqrt(-0.5 * std::expm1(-2.0 * k2 * noise.dt) / k2);
    }
    out.reserve(noise.steps());
    for (const auto& th : noise.theta) {
        SpectralField a = th;
        for (std::size_t i = 0; i < a.size(); ++i) a[i] *= A[i];
        out.push_back(derivative(a, 0));
    }
    return out;
}

std::vector<SpectralField> coarsen_increments(const std::vector<SpectralField>& fine, double dt, int k) {
    if (k < 1 || fine.size() % std::size_t(k) != 0) throw ArgumentError("coarsen_increments: bad factor");
    std::vector<SpectralField> out;
    for (std::size_t i = 0; i < fine.size(); i += k)
        out.push_back(aggregate_increments(std::vector<SpectralField>(fine.begin() + i, fine.begin() + i + k), dt));
    return out;
}

FieldPath ou_path(const std::vector<SpectralField>& increments, double dt) {
    if (increments.empty()) throw ArgumentError("ou_path: no increments");
    const ExpIntegrator integ(increments[0].grid(), dt);
    FieldPath X;
    X.reserve(increments.size() + 1);
    X.emplace_back(increments[0].grid());
    for (const auto& G : increments) X.push_back(integ.propagate(X.back()) + G);
    return X;
}

SbeEnhancement build_sbe_enhancement(const std::vector<SpectralField>& increments, double dt, int n,
                                     const DyadicPartition& part, double gamma) {
    SbeEnhancement e;
    e.n = n;
    e.gamma = gamma;
    e.dt = dt;
    e.X = ou_path(increments, dt);
    if (e.X[0].grid().dim() != 1) throw StructuralError("sbe: one-dimensional fields only");
    e.cherry = duhamel_bilinear(e.X, e.X, dt);
    e.chain = duhamel_bilinear(e.cherry, e.X, dt);
    e.balanced = duhamel_bilinear(e.cherry, e.cherry, dt);
    e.chain3 = duhamel_bilinear(e.chain, e.X, dt);
    const ExpIntegrator integ(e.X[0].grid(), dt);
    e.Q.emplace_back(e.X[0].grid());
    for (std::size_t i = 0; i + 1 < e.X.size(); ++i) e.Q.push_back(integ.step(e.Q.back(), derivative(e.X[i], 0)));
    for (std::size_t i = 0; i < e.X.size(); ++i) {
        e.res_cherry.push_back(resonant(e.cherry[i], e.X[i], part));
        e.res_Q.push_back(resonant(e.Q[i], e.X[i], part));
    }
    return e;
}

SbeEnhancement build_sbe_enhancement(std::uint64_t seed, std::uint64_t replica, int n, const TorusGrid& g,
                                     double dt, double t_final, double gamma) {
    const auto steps = std::size_t(std::lround(t_final / dt));
    const auto noise = sbe_noise(g, n, dt, steps, seed, replica);
    return build_sbe_enhancement(sbe_increments(noise), dt, n, build_partition(g), gamma);
}

FieldPath solve_sbe_galerkin(const std::vector<SpectralField>& increments, double dt, const SpectralField& u0) {
    const ExpIntegrator integ(u0.grid(), dt);
    const int N = u0.grid().max_mode();
    FieldPath u{u0};
    u.reserve(increments.size() + 1);
    for (const auto& G : increments) u.push_back(integ.step(u.back(), burgers_drift(u.back(), N)) + G);
    return u;
}

namespace {

struct UqTerms {
    SpectralField uprime, sharp, rhs;
};

UqTerms uq_rhs(const SbeEnhancement& e, std::size_t i, const SpectralField& uQ, const DyadicPartition& part) {
    UqTerms t;
    const auto& X = e.X[i];
    t.uprime = 4.0 * e.chain[i] + 2.0 * uQ;
    t.sharp = uQ - para_less(t.uprime, e.Q[i], part);
    const Paraproducts pp = paraproduct_decompose(uQ, X, part);
    const SpectralField uQX = pp.less + pp.greater + commutator_C(t.uprime, e.Q[i], X, part) +
                              dealiased_product(t.uprime, e.res_Q[i]) + resonant(t.sharp, X, part);
    const SpectralField w = uQ + 2.0 * e.chain[i];
    t.rhs = dx_product(e.cherry[i], e.cherry[i]) + 4.0 * dx_product(X, e.chain[i]) + 2.0 * derivative(uQX, 0) +
            2.0 * dx_product(e.cherry[i], w) + dx_product(w, w);
    return t;
}

SbeParacontrolledState make_state(const SbeEnhancement& e, std::size_t i, SpectralField uQ, const UqTerms& t) {
    SbeParacontrolledState s;
    s.u = e.X[i] + e.cherry[i] + 2.0 * e.chain[i] + uQ;
    s.uQ = std::move(uQ);
    s.uprime = t.uprime;
    s.sharp = t.sharp;
    return s;
}

}  // namespace

SbeSolution solve_sbe_paracontrolled(const SbeEnhancement& enh, const SpectralField& u0, const DyadicPartition& part,
                                     const SbeOptions& opt) {
    if (enh.X.empty()) throw ArgumentError("sbe: empty enhancement");
    require_same_grid(enh.X[0], u0, "sbe initial condition");
    const ExpIntegrator integ(u0.grid(), enh.dt);
    SbeSolution out;
    // all tree terms vanish at t = 0, so uQ(0) = u0
    UqTerms cur = uq_rhs(enh, 0, u0, part);
    out.path.push_back(make_state(enh, 0, u0, cur));
    for (std::size_t i = 0; i < enh.steps(); ++i) {
        const SpectralField& uQ = out.path.back().uQ;
        SpectralField next = integ.step(uQ, cur.rhs);
        if (opt.scheme == SbeScheme::Etd2) {
            bool done = false;
            for (int it = 1; it <= opt.picard_max; ++it) {
                SpectralField cand = integ.step2(uQ, cur.rhs, uq_rhs(enh, i + 1, next, part).rhs);
                const double d = max_coeff_diff(cand, next);
                next = std::move(cand);
                if (d <= opt.picard_tol * (1.0 + max_coeff(next))) {
                    out.max_picard = std::max(out.max_picard, it);
                    done = true;
                    break;
                }
            }
            if (!done) throw StepError("sbe: Picard iteration did not converge; reduce dt");
        }
        cur = uq_rhs(enh, i + 1, next, part);
        auto st = make_state(enh, i + 1, std::move(next), cur);
        out.ansatz_defect =
            std::max(out.ansatz_defect, max_coeff_diff(st.uQ, para_less(st.uprime, enh.Q[i + 1], part) + st.sharp));
        const double s = sup_norm(st.u);
        if (!std::isfinite(s) || s > opt.blowup) {
            out.exploded = true;
            out.explosion_time = (i + 1) * enh.dt;
            break;
        }
        out.path.push_back(std::move(st));
    }
    return out;
}

FieldPath truncated_tree_expansion(const FieldPath& X, double dt, int order) {
    if (order < 1 || order > 4) throw ArgumentError("truncated_tree_expansion: order must be in [1, 4]");
    FieldPath sum(X.size(), SpectralField(X[0].grid()));
    for (const auto& t : enumerate_trees(order - 1)) {
        const FieldPath term = tree_term(*t, X, dt);
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i].axpy(double(t->count), term[i]);
    }
    return sum;
}

double relative_l2(const SpectralField& a, const SpectralField& b) {
    return l2_norm(a - b) / l2_norm(b);
}

}  // namespace parapde
