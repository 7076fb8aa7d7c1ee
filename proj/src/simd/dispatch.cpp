#include "rmdp/simd.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace rmdp::simd {

namespace {

Isa initial_isa() {
    if (const char* env = std::getenv("RMDP_SIMD")) {
        const std::string_view name(env);
        for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
            if (name == isa_name(isa) && isa_supported(isa)) {
                return isa;
            }
        }
    }
    return detected_isa();
}

std::atomic<Isa>& active() {
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
    }
    return "unknown";
}

bool isa_supported(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return true;
        case Isa::avx2:
#if defined(RMDP_HAVE_AVX2)
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Isa::neon:
#if defined(RMDP_HAVE_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Isa detected_isa() {
    if (isa_supported(Isa::avx2)) return Isa::avx2;
    if (isa_supported(Isa::neon)) return Isa::neon;
    return Isa::scalar;
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
    if (!isa_supported(isa)) {
        throw std::invalid_argument("SIMD variant '" + std::string(isa_name(isa)) +
                                    "' is not supported on this CPU");
    }
    active().store(isa, std::memory_order_relaxed);
}

const KernelTable& kernels_for(Isa isa) {
    switch (isa) {
#if defined(RMDP_HAVE_AVX2)
        case Isa::avx2:
            if (isa_supported(isa)) return detail::avx2_kernels();
            break;
#endif
#if defined(RMDP_HAVE_NEON)
        case Isa::neon:
            return detail::neon_kernels();
#endif
        default:
            break;
    }
    return detail::scalar_kernels();
}

const KernelTable& kernels() { return kernels_for(active_isa()); }

}  // namespace rmdp::simd
