#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace parapde {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Periodic grid on [0, 2π)^d with M points per axis, stored in FFT order.
// Wavenumber of axis index i is i for i < M/2 and i − M otherwise; the row i = M/2
// (Nyquist) has no partner under k ↦ −k and is kept at zero.
class TorusGrid {
public:
    TorusGrid() = default;
    TorusGrid(int dim, int modes_per_axis);

    int dim() const { return dim_; }
    int modes() const { return m_; }
    std::size_t size() const { return size_; }
    int max_mode() const { return m_ / 2 - 1; }

    int wavenumber(int axis_index) const { return axis_index < m_ / 2 ? axis_index : axis_index - m_; }
    int axis_index(int k) const { return k >= 0 ? k : k + m_; }

    std::array<int, 3> mode(std::size_t flat) const;
    std::size_t flat(std::array<int, 3> k) const;

    bool nyquist(std::size_t flat) const { return t_->nyq[flat] != 0; }
    std::size_t neg(std::size_t flat) const { return t_->neg[flat]; }
    double k2(std::size_t flat) const { return t_->k2[flat]; }
    double knorm(std::size_t flat) const { return t_->kn[flat]; }
    int kinf(std::size_t flat) const { return t_->kinf[flat]; }
    double kcomp(int axis, std::size_t flat) const { return t_->kc[axis][flat]; }

    const std::vector<double>& k2_table() const { return t_->k2; }
    const std::vector<double>& knorm_table() const { return t_->kn; }
    const std::vector<double>& kcomp_table(int axis) const { return t_->kc[axis]; }

    double cell_volume() const;
    double point(int axis_index) const { return kTwoPi * axis_index / m_; }

    bool operator==(const TorusGrid& o) const { return dim_ == o.dim_ && m_ == o.m_; }
    bool operator!=(const TorusGrid& o) const { return !(*this == o); }

private:
    struct Tables {
        std::vector<double> k2, kn;
        std::vector<int> kinf;
        std::vector<std::size_t> neg;
        std::vector<unsigned char> nyq;
        std::array<std::vector<double>, 3> kc;
    };
    int dim_ = 0;
    int m_ = 0;
    std::size_t size_ = 0;
    // Shared read-only; copying a grid is cheap.
    std::shared_ptr<const Tables> t_;
};

class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(const TorusGrid& g, bool real = true);
    SpectralField(const TorusGrid& g, std::vector<cplx> coeffs, bool real = true);

    const TorusGrid& grid() const { return grid_; }
    bool real() const { return real_; }
    void set_real(bool r) { real_ = r; }

    std::size_t size() const { return c_.size(); }
    const std::vector<cplx>& coeffs() const { return c_; }
    std::vector<cplx>& coeffs() { return c_; }
    cplx operator[](std::size_t i) const { return c_[i]; }
    cplx& operator[](std::size_t i) { return c_[i]; }

    cplx at(std::array<int, 3> k) const;
    void set(std::array<int, 3> k, cplx v);

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);
    SpectralField& axpy(double s, const SpectralField& o);

private:
    TorusGrid grid_;
    std::vector<cplx> c_;
    bool real_ = true;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

struct TimeSlice {
    double time = 0.0;
    SpectralField field;
};

using FieldPath = std::vector<SpectralField>;

void require_same_grid(const SpectralField& a, const SpectralField& b, const char* what);

// --- transforms -----------------------------------------------------------------------

SpectralField forward(const TorusGrid& g, std::span<const double> values);
SpectralField forward_complex(const TorusGrid& g, std::span<const cplx> values, bool real);
std::vector<double> inverse(const SpectralField& f);
std::vector<cplx> inverse_complex(const SpectralField& f);

// Evaluate on a finer grid of P points per axis (P ≥ M, even).
std::vector<cplx> to_padded(const SpectralField& f, int P);
// Forward transform of P-grid samples, truncated to the band of `target`.
SpectralField from_padded(const TorusGrid& target, std::span<const cplx> values, int P, bool real);

double value_at(const SpectralField& f, std::array<double, 3> x);

// --- multipliers and products --------------------------------------------------------

SpectralField project_modes(const SpectralField& f, int N);
SpectralField derivative(const SpectralField& f, int axis);
SpectralField heat_propagate(const SpectralField& f, double t);
SpectralField duhamel_step(const SpectralField& state, const SpectralField& source, double dt);

// Largest |k|_∞ carrying a nonzero coefficient (−1 for the zero field).
int band_limit(const SpectralField& f, double tol = 0.0);

// Smallest even padded size giving an exact product on |k|_∞ ≤ retained.
int required_padding(int bf, int bg, int retained);

// Exact convolution (2π)^{−d/2} Σ f̂(k−ℓ)ĝ(ℓ) on the grid band; pads to 2M.
SpectralField dealiased_product(const SpectralField& f, const SpectralField& g);
// Same with an explicit padded size; throws AliasingError if P is too small.
SpectralField dealiased_product(const SpectralField& f, const SpectralField& g, int P);

SpectralField constant_field(const TorusGrid& g, double c);

double l2_norm(const SpectralField& f);
double sup_norm(const SpectralField& f);
double mean_value(const SpectralField& f);
double max_hermitian_defect(const SpectralField& f);

// Exponential-integrator multipliers for a fixed step, cached for reuse.
class ExpIntegrator {
public:
    ExpIntegrator(const TorusGrid& g, double dt);
    double dt() const { return dt_; }
    // e^{−k²dt} state + φ₁ source, φ₁ = (1 − e^{−k²dt})/k² (dt at k = 0)
    SpectralField step(const SpectralField& state, const SpectralField& source) const;
    // Second-order correction weight φ₂ = (k²dt − 1 + e^{−k²dt})/(k⁴dt), dt/2 at k = 0.
    SpectralField step2(const SpectralField& state, const SpectralField& src0,
                        const SpectralField& src1) const;
    SpectralField propagate(const SpectralField& f) const;
    const std::vector<double>& decay() const { return e_; }
    const std::vector<double>& phi1() const { return phi1_; }

private:
    double dt_;
    std::vector<double> e_, phi1_, phi2_;
};

// --- serialization ------------------------------------------------------------------

// JSON: {"dim","modes","real","coeffs":[[k...],re,im] ...} row-major over the lattice.
std::string to_json(const SpectralField& f);
SpectralField field_from_json(const std::string& text);

}  // namespace parapde
