#pragma once

#include "parapde/spectral.hpp"

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace parapde {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// χ = ρ_{−1} supported in |k| ≤ 4/3, ρ in 3/4 ≤ |k| ≤ 8/3, ρ_j = ρ(2^{−j}·).
struct DyadicPartition {
    TorusGrid grid;
    int j_max = 0;
    double a = 0.75, b = 4.0 / 3.0, c = 8.0 / 3.0;
    double profile = 1.0;
    // mult[j + 1][flat] for j = −1..j_max
    std::vector<std::vector<double>> mult;

    int blocks() const { return j_max + 2; }
    double value(int j, std::size_t flat) const { return mult[j + 1][flat]; }
};

// Radial profiles on [0, ∞).
double partition_chi(double r, double profile = 1.0);
double partition_rho(double r, double profile = 1.0);

DyadicPartition build_partition(const TorusGrid& g, double profile = 1.0);
std::string partition_csv(const DyadicPartition& p);

SpectralField block(const SpectralField& f, const DyadicPartition& p, int j);
// S_j f = Σ_{i ≤ j−1} Δ_i f
SpectralField low_part(const SpectralField& f, const DyadicPartition& p, int j);

struct BlockDecomposition {
    std::vector<SpectralField> blocks;  // index j + 1
    const SpectralField& at(int j) const { return blocks[j + 1]; }
    SpectralField sum() const;
};
BlockDecomposition decompose(const SpectralField& f, const DyadicPartition& p);

// Lattice L^p norm of a field's grid samples (p may be kInf).
double lp_norm(const SpectralField& f, double p);
std::vector<double> block_norms(const SpectralField& f, const DyadicPartition& part, double p);
double besov_norm(const SpectralField& f, double alpha, double p, double q, const DyadicPartition& part);

struct Paraproducts {
    SpectralField less, greater, resonant;
};
Paraproducts paraproduct_decompose(const SpectralField& f, const SpectralField& g, const DyadicPartition& p);
SpectralField para_less(const SpectralField& f, const SpectralField& g, const DyadicPartition& p);
SpectralField resonant(const SpectralField& f, const SpectralField& g, const DyadicPartition& p);

// ((f ≺ g) ∘ h) − f (g ∘ h)
SpectralField commutator_C(const SpectralField& f, const SpectralField& g, const SpectralField& h,
                           const DyadicPartition& p);

struct Nonlinearity {
    std::string name;
    std::function<double(double)> f, df, d2f;
};
Nonlinearity linear_nonlinearity();
Nonlinearity sine_nonlinearity(double a);
Nonlinearity square_nonlinearity();
Nonlinearity constant_nonlinearity(double c);
Nonlinearity zero_nonlinearity();

// Pointwise F(f) evaluated on a doubled grid and projected back to the band.
SpectralField apply_pointwise(const SpectralField& f, const std::function<double(double)>& F);

// R_F(f) = F(f) − F′(f) ≺ f
SpectralField paralinearize(const Nonlinearity& F, const SpectralField& f, const DyadicPartition& p);

}  // namespace parapde
