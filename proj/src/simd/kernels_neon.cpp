// aarch64 only; Advanced SIMD is part of the base ISA there.

#include "rmdp/simd.hpp"

#include <arm_neon.h>

#include <algorithm>
#include <cmath>

namespace rmdp::simd::detail {

namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    }
    double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

void min_inplace_neon(double* dst, const double* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t d = vld1q_f64(dst + i);
        float64x2_t s = vld1q_f64(src + i);
        // select src only where strictly smaller, as in the scalar kernel
        uint64x2_t lt = vcltq_f64(s, d);
        vst1q_f64(dst + i, vbslq_f64(lt, s, d));
    }
    for (; i < n; ++i) {
        if (src[i] < dst[i]) {
            dst[i] = src[i];
        }
    }
}

double max_abs_diff_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t m = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        m = vmaxq_f64(m, vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    }
    double r = vmaxvq_f64(m);
    for (; i < n; ++i) {
        r = std::max(r, std::fabs(a[i] - b[i]));
    }
    return r;
}

}  // namespace

const KernelTable& neon_kernels() {
    static const KernelTable table{dot_neon, min_inplace_neon, max_abs_diff_neon};
    return table;
}

}  // namespace rmdp::simd::detail
