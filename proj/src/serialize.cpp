#include "parapde/errors.hpp"
#include "parapde/spectral.hpp"

#include <json.hpp>

namespace parapde {

std::string to_json(const SpectralField& f) {
    const auto& g = f.grid();
    nlohmann::json j;
    j["dim"] = g.dim();
    j["modes"] = g.modes();
    j["real"] = f.real();
    auto arr = nlohmann::json::array();
    const int B = g.max_mode();
    std::array<int, 3> k{0, 0, 0};
    // Row-major over the lattice −B..B in each axis.
    std::size_t count = 1;
    for (int a = 0; a < g.dim(); ++a) count *= static_cast<std::size_t>(2 * B + 1);
    for (std::size_t n = 0; n < count; ++n) {
        std::size_t r = n;
        for (int a = g.dim() - 1; a >= 0; --a) {
            k[a] = static_cast<int>(r % (2 * B + 1)) - B;
            r /= (2 * B + 1);
        }
        const cplx v = f.at(k);
        auto row = nlohmann::json::array();
        for (int a = 0; a < g.dim(); ++a) row.push_back(k[a]);
        row.push_back(v.real());
        row.push_back(v.imag());
        arr.push_back(std::move(row));
    }
    j["coeffs"] = std::move(arr);
    return j.dump();
}

SpectralField field_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw StructuralError(std::string("field json: ") + e.what());
    }
    const TorusGrid g(j.at("dim").get<int>(), j.at("modes").get<int>());
    SpectralField f(g, j.at("real").get<bool>());
    for (const auto& row : j.at("coeffs")) {
        if (row.size() != static_cast<std::size_t>(g.dim() + 2)) throw StructuralError("field json: bad row");
        std::array<int, 3> k{0, 0, 0};
        for (int a = 0; a < g.dim(); ++a) k[a] = row[a].get<int>();
        f.set(k, cplx(row[g.dim()].get<double>(), row[g.dim() + 1].get<double>()));
    }
    return f;
}

}  // namespace parapde
