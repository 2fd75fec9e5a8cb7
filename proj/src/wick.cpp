#include "parapde/wick.hpp"
#include "parapde/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <unordered_map>

namespace parapde {
namespace {

std::uint64_t factorial(int n) {
    std::uint64_t r = 1;
    for (int i = 2; i <= n; ++i) r *= std::uint64_t(i);
    return r;
}

void require_square(const Matrix& a, const char* what) {
    for (const auto& row : a)
        if (row.size() != a.size()) throw ArgumentError(std::string(what) + ": matrix must be square");
}

double cov_at(const Matrix& cov, int i, int j) {
    if (i < 0 || j < 0 || std::size_t(i) >= cov.size() || std::size_t(j) >= cov.size())
        throw ArgumentError("variable index outside covariance table");
    return cov[i][j];
}

}  // namespace

std::vector<WickTerm> wick_product_expand(int m, int n) {
    if (m < 0 || n < 0) throw ArgumentError("wick_product_expand: degrees must be non-negative");
    if (m + n > 20) throw ArgumentError("wick_product_expand: degree too large");
    std::vector<WickTerm> out;
    for (int l = 0; l <= std::min(m, n); ++l) {
        const int p = m - l, q = n - l;
        out.push_back({p, q, l, factorial(m) / factorial(p) * factorial(n) / factorial(q) / factorial(l)});
    }
    return out;
}

double permanent(const Matrix& a) {
    require_square(a, "permanent");
    const int n = int(a.size());
    if (n == 0) return 1.0;
    if (n > 24) throw ArgumentError("permanent: matrix too large");
    // Ryser: perm A = (−1)^n Σ_{S ⊆ cols} (−1)^{|S|} Π_i Σ_{j∈S} a_ij
    double total = 0.0;
    std::vector<double> rows(n, 0.0);
    for (std::uint64_t s = 1; s < (std::uint64_t(1) << n); ++s) {
        // Gray code: one column toggles per step
        const std::uint64_t gray = s ^ (s >> 1), prev = (s - 1) ^ ((s - 1) >> 1);
        const std::uint64_t diff = gray ^ prev;
        const int j = __builtin_ctzll(diff);
        const double sign = (gray & diff) ? 1.0 : -1.0;
        for (int i = 0; i < n; ++i) rows[i] += sign * a[i][j];
        double prod = 1.0;
        for (int i = 0; i < n; ++i) prod *= rows[i];
        total += ((__builtin_popcountll(gray) & 1) ? -1.0 : 1.0) * prod;
    }
    return (n & 1) ? -total : total;
}

double wick_expectation(const Matrix& gram) {
    require_square(gram, "wick_expectation");
    for (std::size_t i = 0; i < gram.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (gram[i][j] != gram[j][i]) throw ArgumentError("wick_expectation: gram must be symmetric");
    return permanent(gram);
}

double wick_pair_expectation(const Monomial& a, const Monomial& b, const Matrix& cov) {
    require_square(cov, "wick_pair_expectation");
    if (a.size() != b.size()) return 0.0;
    Matrix t(a.size(), std::vector<double>(b.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) t[i][j] = cov_at(cov, a[i], b[j]);
    return permanent(t);
}

Polynomial poly_mul(const Polynomial& a, const Polynomial& b) {
    Polynomial out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            Monomial m(ma);
            m.insert(m.end(), mb.begin(), mb.end());
            std::sort(m.begin(), m.end());
            out[m] += ca * cb;
        }
    return out;
}

void poly_add(Polynomial& a, const Polynomial& b, double s) {
    for (const auto& [m, c] : b) a[m] += s * c;
}

void poly_prune(Polynomial& a) {
    std::erase_if(a, [](const auto& kv) { return kv.second == 0.0; });
}

Polynomial wick_polynomial(const Monomial& vars, const Matrix& cov) {
    require_square(cov, "wick_polynomial");
    Polynomial out;
    std::vector<int> free;
    // Sum over partial matchings, each pair contributing −C.
    std::function<void(std::vector<int>, double)> rec = [&](std::vector<int> rest, double w) {
        if (rest.empty()) {
            Monomial m(free);
            std::sort(m.begin(), m.end());
            out[m] += w;
            return;
        }
        const int a = rest.front();
        std::vector<int> tail(rest.begin() + 1, rest.end());
        free.push_back(a);
        rec(tail, w);
        free.pop_back();
        for (std::size_t j = 0; j < tail.size(); ++j) {
            std::vector<int> r2;
            for (std::size_t t = 0; t < tail.size(); ++t)
                if (t != j) r2.push_back(tail[t]);
            rec(r2, -w * cov_at(cov, a, tail[j]));
        }
    };
    rec(vars, 1.0);
    poly_prune(out);
    return out;
}

double isserlis_monomial(const Monomial& vars, const Matrix& cov) {
    if (int(vars.size()) > kIsserlisMaxDegree)
        throw ArgumentError("isserlis_oracle: degree exceeds " + std::to_string(kIsserlisMaxDegree));
    if (vars.size() % 2 == 1) return 0.0;
    std::function<double(const std::vector<int>&)> rec = [&](const std::vector<int>& v) -> double {
        if (v.empty()) return 1.0;
        double s = 0.0;
        for (std::size_t j = 1; j < v.size(); ++j) {
            const double c = cov_at(cov, v[0], v[j]);
            if (c == 0.0) continue;
            std::vector<int> r;
            for (std::size_t t = 1; t < v.size(); ++t)
                if (t != j) r.push_back(v[t]);
            s += c * rec(r);
        }
        return s;
    };
    return rec(vars);
}

double isserlis_oracle(const Polynomial& p, const Matrix& cov) {
    require_square(cov, "isserlis_oracle");
    double s = 0.0;
    for (const auto& [m, c] : p)
        if (c != 0.0) s += c * isserlis_monomial(m, cov);
    return s;
}

// --- trees ----------------------------------------------------------------------------

TreePtr make_leaf() {
    static const TreePtr leaf = [] {
        auto t = std::make_shared<BinaryTree>();
        t->shape = "x";
        return TreePtr(t);
    }();
    return leaf;
}

bool tree_less(const BinaryTree& a, const BinaryTree& b) {
    if (a.degree != b.degree) return a.degree < b.degree;
    return a.shape < b.shape;
}

TreePtr make_node(TreePtr a, TreePtr b) {
    if (!a || !b) throw ArgumentError("make_node: null child");
    if (tree_less(*b, *a)) std::swap(a, b);
    auto t = std::make_shared<BinaryTree>();
    t->degree = 1 + a->degree + b->degree;
    // c((τ₁τ₂)) sums c(τ₁)c(τ₂) over ordered pairs forming the same unordered node
    t->count = (a->shape == b->shape) ? a->count * b->count : 2 * a->count * b->count;
    t->shape = "(" + a->shape + b->shape + ")";
    t->left = std::move(a);
    t->right = std::move(b);
    return t;
}

std::vector<TreePtr> enumerate_trees(int max_degree) {
    if (max_degree < 0 || max_degree > kMaxTreeDegree)
        throw ArgumentError("enumerate_trees: degree must be in [0, " + std::to_string(kMaxTreeDegree) + "]");
    std::vector<std::vector<TreePtr>> by(max_degree + 1);
    by[0] = {make_leaf()};
    for (int n = 1; n <= max_degree; ++n) {
        for (int a = 0; 2 * a <= n - 1; ++a) {
            const int b = n - 1 - a;
            for (std::size_t i = 0; i < by[a].size(); ++i)
                for (std::size_t j = (a == b ? i : 0); j < by[b].size(); ++j) by[n].push_back(make_node(by[a][i], by[b][j]));
        }
        std::sort(by[n].begin(), by[n].end(), [](const TreePtr& x, const TreePtr& y) { return tree_less(*x, *y); });
    }
    std::vector<TreePtr> out;
    for (auto& v : by) out.insert(out.end(), v.begin(), v.end());
    return out;
}

std::vector<TreePtr> trees_of_degree(int degree) {
    auto all = enumerate_trees(degree);
    std::erase_if(all, [&](const TreePtr& t) { return t->degree != degree; });
    return all;
}

std::uint64_t catalan(int n) {
    std::uint64_t c = 1;
    for (int i = 0; i < n; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
    return c;
}

std::uint64_t planar_embeddings(const BinaryTree& t) {
    if (t.leaf()) return 1;
    const std::uint64_t sub = planar_embeddings(*t.left) * planar_embeddings(*t.right);
    return t.left->shape == t.right->shape ? sub : 2 * sub;
}

std::string trees_to_json(const std::vector<TreePtr>& trees) {
    auto arr = nlohmann::json::array();
    for (const auto& t : trees) arr.push_back({{"shape", t->shape}, {"d", t->degree}, {"c", t->count}});
    return arr.dump(2);
}

FieldPath duhamel_bilinear(const FieldPath& f, const FieldPath& g, double dt) {
    if (f.size() != g.size() || f.empty()) throw ArgumentError("duhamel_bilinear: paths must have equal nonzero length");
    const ExpIntegrator integ(f[0].grid(), dt);
    FieldPath out;
    out.reserve(f.size());
    out.emplace_back(f[0].grid());
    for (std::size_t i = 0; i + 1 < f.size(); ++i)
        out.push_back(integ.step(out.back(), derivative(dealiased_product(f[i], g[i]), 0)));
    return out;
}

FieldPath tree_term(const BinaryTree& tau, const FieldPath& X, double dt) {
    std::unordered_map<std::string, FieldPath> memo;
    std::function<const FieldPath&(const BinaryTree&)> eval = [&](const BinaryTree& t) -> const FieldPath& {
        if (t.leaf()) return X;
        if (auto it = memo.find(t.shape); it != memo.end()) return it->second;
        FieldPath v = duhamel_bilinear(eval(*t.left), eval(*t.right), dt);
        return memo.emplace(t.shape, std::move(v)).first->second;
    };
    return eval(tau);
}

}  // namespace parapde
