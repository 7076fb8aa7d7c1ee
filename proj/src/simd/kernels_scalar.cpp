#include "rmdp/simd.hpp"

#include <algorithm>
#include <cmath>

namespace rmdp::simd::detail {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

void min_inplace_scalar(double* dst, const double* src, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        // keep dst on ties so the earliest table wins
        if (src[i] < dst[i]) {
            dst[i] = src[i];
        }
    }
}

double max_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        m = std::max(m, std::fabs(a[i] - b[i]));
    }
    return m;
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{dot_scalar, min_inplace_scalar, max_abs_diff_scalar};
    return table;
}

}  // namespace rmdp::simd::detail
