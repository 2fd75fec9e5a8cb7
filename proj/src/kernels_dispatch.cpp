#include "parapde/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace parapde::kernels {

#ifndef PARAPDE_HAVE_AVX2
const KernelTable* avx2_table() { return nullptr; }
#endif

const KernelTable& active() {
    static const KernelTable& chosen = [] () -> const KernelTable& {
        const char* env = std::getenv("PARAPDE_SIMD");
        if (env && std::string_view(env) == "scalar") return scalar_table();
        if (const KernelTable* t = avx2_table()) return *t;
        return scalar_table();
    }();
    return chosen;
}

}  // namespace parapde::kernels
