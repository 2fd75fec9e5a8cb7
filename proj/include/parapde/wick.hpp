#pragma once

#include "parapde/spectral.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace parapde {

// Wick monomials are Hermite-orthogonalized products of jointly Gaussian coordinates
// Z_i with E[Z_i Z_j] = C_ij; pairing weight is the covariance itself.

// Coefficients of :φ^m: :ψ^n: = Σ_ℓ coeff · C_φψ^ℓ · :φ^p ψ^q:, p = m − ℓ, q = n − ℓ.
struct WickTerm {
    int p = 0;
    int q = 0;
    int l = 0;
    std::uint64_t coeff = 0;
};
std::vector<WickTerm> wick_product_expand(int m, int n);

using Matrix = std::vector<std::vector<double>>;

// Permanent of a square matrix (Ryser's formula); 1 for the empty matrix.
double permanent(const Matrix& a);
// E[:ψ_1⋯ψ_n: :ψ_1⋯ψ_n:] = perm(⟨ψ_r, ψ_s⟩).
double wick_expectation(const Matrix& gram);

// Polynomial in Gaussian coordinates: sorted variable multiset ↦ coefficient.
using Monomial = std::vector<int>;
using Polynomial = std::map<Monomial, double>;

inline constexpr int kIsserlisMaxDegree = 8;

Polynomial poly_mul(const Polynomial& a, const Polynomial& b);
void poly_add(Polynomial& a, const Polynomial& b, double s = 1.0);
void poly_prune(Polynomial& a);
// :Z_{v_1}⋯Z_{v_n}: as an ordinary polynomial under covariance cov.
Polynomial wick_polynomial(const Monomial& vars, const Matrix& cov);

// E[:Z_{a_1}⋯Z_{a_n}: :Z_{b_1}⋯Z_{b_m}:] = δ_nm perm(C_{a_r b_s}).
double wick_pair_expectation(const Monomial& a, const Monomial& b, const Matrix& cov);

// E[Z_{v_1}⋯Z_{v_n}] by summing over pair partitions; 0 for odd n.
double isserlis_monomial(const Monomial& vars, const Matrix& cov);
double isserlis_oracle(const Polynomial& p, const Matrix& cov);

// --- binary trees ---------------------------------------------------------------------

struct BinaryTree;
using TreePtr = std::shared_ptr<const BinaryTree>;

struct BinaryTree {
    TreePtr left, right;  // both null for a leaf; canonical order left ≤ right
    int degree = 0;
    std::uint64_t count = 1;
    std::string shape;  // "x" for a leaf, "(ab)" for a node
    bool leaf() const { return !left; }
};

TreePtr make_leaf();
// Unordered node (τ₁τ₂); children are put in canonical order.
TreePtr make_node(TreePtr a, TreePtr b);
bool tree_less(const BinaryTree& a, const BinaryTree& b);

inline constexpr int kMaxTreeDegree = 12;

// One representative per unordered isomorphism class, ordered by (degree, shape).
std::vector<TreePtr> enumerate_trees(int max_degree);
std::vector<TreePtr> trees_of_degree(int degree);
std::uint64_t catalan(int n);
// Number of distinct planar embeddings, counted node by node.
std::uint64_t planar_embeddings(const BinaryTree& t);

std::string trees_to_json(const std::vector<TreePtr>& trees);

// X^τ on the uniform time grid of X (X[i] at t = i·dt): Leaf ↦ X,
// X^{(τ₁τ₂)} = J∂_x(X^{τ₁}X^{τ₂}) with J the exponential-Euler Duhamel integral from 0.
FieldPath tree_term(const BinaryTree& tau, const FieldPath& X, double dt);
// B(f, g) = J∂_x(fg) on paths.
FieldPath duhamel_bilinear(const FieldPath& f, const FieldPath& g, double dt);

}  // namespace parapde
