#pragma once

// Data-parallel inner kernels used by the dynamic-programming solvers.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, an AVX2/FMA (x86-64) or NEON (aarch64) variant. The variant is
// chosen once at startup from the CPU features and may be overridden with the
// RMDP_SIMD environment variable ("scalar", "avx2", "neon") or set_active_isa().
//
// Vector variants of `dot` reassociate the sum, so they agree with the scalar
// kernel to rounding, not bit-for-bit. `min_inplace` and `max_abs_diff` are
// exact in every variant.

#include <cstddef>
#include <span>
#include <string_view>

namespace rmdp::simd {

enum class Isa { scalar, avx2, neon };

struct KernelTable {
    double (*dot)(const double* a, const double* b, std::size_t n);
    void (*min_inplace)(double* dst, const double* src, std::size_t n);
    double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
};

std::string_view isa_name(Isa isa);
bool isa_supported(Isa isa);

/// Best ISA available on this CPU (ignores the environment override).
Isa detected_isa();

/// ISA currently used by the free functions below.
Isa active_isa();

/// Throws std::invalid_argument if `isa` is not supported on this CPU.
/// Not synchronized with concurrent kernel calls; set it before solving.
void set_active_isa(Isa isa);

const KernelTable& kernels_for(Isa isa);
const KernelTable& kernels();

inline double dot(std::span<const double> a, std::span<const double> b) {
    return kernels().dot(a.data(), b.data(), a.size());
}

inline void min_inplace(std::span<double> dst, std::span<const double> src) {
    kernels().min_inplace(dst.data(), src.data(), dst.size());
}

/// Sup-norm of a - b.
inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    return kernels().max_abs_diff(a.data(), b.data(), a.size());
}

namespace detail {
const KernelTable& scalar_kernels();
#if defined(RMDP_HAVE_AVX2)
const KernelTable& avx2_kernels();
#endif
#if defined(RMDP_HAVE_NEON)
const KernelTable& neon_kernels();
#endif
}  // namespace detail

}  // namespace rmdp::simd
