#include "parapde/errors.hpp"
#include "parapde/kernels.hpp"
#include "parapde/spectral.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace parapde {

TorusGrid::TorusGrid(int dim, int modes_per_axis) : dim_(dim), m_(modes_per_axis) {
    if (dim < 1 || dim > 3) throw StructuralError("grid dimension must be 1, 2 or 3");
    if (m_ < 2 || m_ % 2 != 0) throw StructuralError("modes per axis must be even and positive");
    size_ = 1;
    for (int a = 0; a < dim_; ++a) size_ *= static_cast<std::size_t>(m_);

    auto t = std::make_shared<Tables>();
    t->k2.resize(size_);
    t->kn.resize(size_);
    t->kinf.resize(size_);
    t->neg.resize(size_);
    t->nyq.resize(size_);
    for (int a = 0; a < dim_; ++a) t->kc[a].resize(size_);
    for (std::size_t f = 0; f < size_; ++f) {
        const auto k = mode(f);
        double s = 0.0;
        int mx = 0;
        bool ny = false;
        std::array<int, 3> nk{0, 0, 0};
        for (int a = 0; a < dim_; ++a) {
            s += double(k[a]) * k[a];
            mx = std::max(mx, std::abs(k[a]));
            t->kc[a][f] = k[a];
            if (k[a] == -m_ / 2) ny = true;
            nk[a] = -k[a];
        }
        t->k2[f] = s;
        t->kn[f] = std::sqrt(s);
        t->kinf[f] = mx;
        t->nyq[f] = ny;
        t->neg[f] = ny ? f : flat(nk);
    }
    t_ = std::move(t);
}

std::array<int, 3> TorusGrid::mode(std::size_t f) const {
    std::array<int, 3> k{0, 0, 0};
    for (int a = dim_ - 1; a >= 0; --a) {
        k[a] = wavenumber(static_cast<int>(f % m_));
        f /= m_;
    }
    return k;
}

std::size_t TorusGrid::flat(std::array<int, 3> k) const {
    std::size_t f = 0;
    for (int a = 0; a < dim_; ++a) {
        int i = k[a] % m_;
        if (i < 0) i += m_;
        f = f * m_ + static_cast<std::size_t>(i);
    }
    return f;
}

double TorusGrid::cell_volume() const { return std::pow(kTwoPi / m_, dim_); }

SpectralField::SpectralField(const TorusGrid& g, bool real) : grid_(g), c_(g.size()), real_(real) {}

SpectralField::SpectralField(const TorusGrid& g, std::vector<cplx> coeffs, bool real)
    : grid_(g), c_(std::move(coeffs)), real_(real) {
    if (c_.size() != g.size()) throw StructuralError("coefficient count does not match grid");
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (g.nyquist(i)) c_[i] = 0.0;
}

cplx SpectralField::at(std::array<int, 3> k) const {
    for (int a = 0; a < grid_.dim(); ++a)
        if (std::abs(k[a]) > grid_.max_mode()) return 0.0;
    return c_[grid_.flat(k)];
}

void SpectralField::set(std::array<int, 3> k, cplx v) {
    for (int a = 0; a < grid_.dim(); ++a)
        if (std::abs(k[a]) > grid_.max_mode()) throw StructuralError("mode outside grid band");
    c_[grid_.flat(k)] = v;
}

void require_same_grid(const SpectralField& a, const SpectralField& b, const char* what) {
    if (a.grid() != b.grid())
        throw StructuralError(std::string(what) + ": grid mismatch");
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    require_same_grid(*this, o, "add");
    kernels::active().axpy(c_.data(), 1.0, o.c_.data(), c_.size());
    real_ = real_ && o.real_;
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    require_same_grid(*this, o, "subtract");
    kernels::active().axpy(c_.data(), -1.0, o.c_.data(), c_.size());
    real_ = real_ && o.real_;
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
}

SpectralField& SpectralField::axpy(double s, const SpectralField& o) {
    require_same_grid(*this, o, "axpy");
    kernels::active().axpy(c_.data(), s, o.c_.data(), c_.size());
    real_ = real_ && o.real_;
    return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

}  // namespace parapde
