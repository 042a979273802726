#include "edbsw/simd.hpp"

#include "kernels_tables.hpp"

#include <algorithm>
#include <cmath>

// Scalar reference kernels. These define the semantics; the SIMD variants
// must reproduce them bit-for-bit (see test_kernels.cpp). Keep operation
// order explicit — the library is built with -ffp-contract=off so the
// compiler cannot fuse the multiply-add chains differently per target.

namespace edbsw::kernels {
namespace {

void axpby_scalar(double* out, const double* a, const double* b, double alpha, double beta,
                  std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = alpha * a[i] + beta * b[i];
}

void axpy_scalar(double* acc, const double* x, double s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] = acc[i] + s * x[i];
}

void mag2_scalar(double* out, const double* x, const double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::sqrt(x[i] * x[i] + y[i] * y[i]);
}

void mag3_scalar(double* out, const double* a, const double* b, const double* c, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::sqrt((a[i] * a[i] + b[i] * b[i]) + c[i] * c[i]);
}

void stencil3x3_min_scalar(double* out, const double* rm, const double* r0, const double* rp,
                           const double* w, double lo, double hi, std::size_t n) {
    for (std::size_t x = 1; x + 1 < n; ++x) {
        double m = rm[x - 1] - w[0];
        m = std::min(m, rm[x] - w[1]);
        m = std::min(m, rm[x + 1] - w[2]);
        m = std::min(m, r0[x - 1] - w[3]);
        m = std::min(m, r0[x] - w[4]);
        m = std::min(m, r0[x + 1] - w[5]);
        m = std::min(m, rp[x - 1] - w[6]);
        m = std::min(m, rp[x] - w[7]);
        m = std::min(m, rp[x + 1] - w[8]);
        out[x] = std::min(std::max(m, lo), hi);
    }
}

void stencil3x3_max_scalar(double* out, const double* rm, const double* r0, const double* rp,
                           const double* w, double lo, double hi, std::size_t n) {
    for (std::size_t x = 1; x + 1 < n; ++x) {
        double m = rm[x - 1] + w[0];
        m = std::max(m, rm[x] + w[1]);
        m = std::max(m, rm[x + 1] + w[2]);
        m = std::max(m, r0[x - 1] + w[3]);
        m = std::max(m, r0[x] + w[4]);
        m = std::max(m, r0[x + 1] + w[5]);
        m = std::max(m, rp[x - 1] + w[6]);
        m = std::max(m, rp[x] + w[7]);
        m = std::max(m, rp[x + 1] + w[8]);
        out[x] = std::min(std::max(m, lo), hi);
    }
}

void minmax_scalar(const double* a, std::size_t n, double* mn, double* mx) {
    double lo = a[0], hi = a[0];
    for (std::size_t i = 1; i < n; ++i) {
        lo = std::min(lo, a[i]);
        hi = std::max(hi, a[i]);
    }
    *mn = lo;
    *mx = hi;
}

double sum_sq_diff_scalar(const double* a, const double* b, std::size_t n) {
    // Four independent accumulators, lane j taking indices j, j+4, j+8, ...
    // This matches the AVX2 register layout exactly so both paths round
    // identically.
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        for (std::size_t j = 0; j < 4; ++j) {
            double d = a[i + j] - b[i + j];
            acc[j] = acc[j] + d * d;
        }
    }
    for (; i < n; ++i) {
        double d = a[i] - b[i];
        acc[i % 4] = acc[i % 4] + d * d;
    }
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

void threshold_gt_scalar(double* out, const double* a, double t, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] > t ? a[i] : 0.0;
}

void shift_scale_scalar(double* out, const double* a, double shift, double scale, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (a[i] + shift) * scale;
}

}  // namespace

const KernelTable kScalarTable = {
    axpby_scalar,        axpy_scalar,          mag2_scalar,         mag3_scalar,
    stencil3x3_min_scalar, stencil3x3_max_scalar, minmax_scalar,
    sum_sq_diff_scalar,  threshold_gt_scalar,  shift_scale_scalar,  "scalar",
};

}  // namespace edbsw::kernels
