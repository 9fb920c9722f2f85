#include <cstdlib>
#include <string_view>

#include "frontlearn/simd/kernels.hpp"
#include "kernels_internal.hpp"

namespace frontlearn::simd {

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "unknown";
}

const KernelTable* avx2_kernels() noexcept {
#if defined(FRONTLEARN_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__)) && defined(__GNUC__)
    static const bool supported = [] {
        __builtin_cpu_init();
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    }();
    return supported ? &avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& kernels() noexcept {
    static const KernelTable& selected = []() -> const KernelTable& {
        const char* env = std::getenv("FRONTLEARN_ISA");
        if (env != nullptr && std::string_view(env) == "scalar") return scalar_kernels();
        if (const KernelTable* t = avx2_kernels()) return *t;
        return scalar_kernels();
    }();
    return selected;
}

}  // namespace frontlearn::simd
