#include "edbsw/simd.hpp"

#include "kernels_tables.hpp"

// NEON kernel variants (aarch64). Same contract as the AVX2 file: identical
// per-element operation order to the scalar reference, no fused multiply-add,
// 2-wide lanes feeding the same pinned 4-accumulator reduction layout.

#if defined(__aarch64__)

#include <arm_neon.h>

#include <algorithm>
#include <cmath>

namespace edbsw::kernels {
namespace {

void axpby_neon(double* out, const double* a, const double* b, double alpha, double beta,
                std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    const float64x2_t vb = vdupq_n_f64(beta);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t xa = vmulq_f64(va, vld1q_f64(a + i));
        float64x2_t xb = vmulq_f64(vb, vld1q_f64(b + i));
        vst1q_f64(out + i, vaddq_f64(xa, xb));
    }
    for (; i < n; ++i) out[i] = alpha * a[i] + beta * b[i];
}

void axpy_neon(double* acc, const double* x, double s, std::size_t n) {
    const float64x2_t vs = vdupq_n_f64(s);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t v = vaddq_f64(vld1q_f64(acc + i), vmulq_f64(vs, vld1q_f64(x + i)));
        vst1q_f64(acc + i, v);
    }
    for (; i < n; ++i) acc[i] = acc[i] + s * x[i];
}

void mag2_neon(double* out, const double* x, const double* y, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t vx = vld1q_f64(x + i);
        float64x2_t vy = vld1q_f64(y + i);
        float64x2_t s = vaddq_f64(vmulq_f64(vx, vx), vmulq_f64(vy, vy));
        vst1q_f64(out + i, vsqrtq_f64(s));
    }
    for (; i < n; ++i) out[i] = std::sqrt(x[i] * x[i] + y[i] * y[i]);
}

void mag3_neon(double* out, const double* a, const double* b, const double* c, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t va = vld1q_f64(a + i);
        float64x2_t vb = vld1q_f64(b + i);
        float64x2_t vc = vld1q_f64(c + i);
        float64x2_t s =
            vaddq_f64(vaddq_f64(vmulq_f64(va, va), vmulq_f64(vb, vb)), vmulq_f64(vc, vc));
        vst1q_f64(out + i, vsqrtq_f64(s));
    }
    for (; i < n; ++i) out[i] = std::sqrt((a[i] * a[i] + b[i] * b[i]) + c[i] * c[i]);
}

void stencil3x3_min_neon(double* out, const double* rm, const double* r0, const double* rp,
                         const double* w, double lo, double hi, std::size_t n) {
    const float64x2_t vlo = vdupq_n_f64(lo);
    const float64x2_t vhi = vdupq_n_f64(hi);
    float64x2_t vw[9];
    for (int k = 0; k < 9; ++k) vw[k] = vdupq_n_f64(w[k]);
    std::size_t x = 1;
    for (; x + 2 <= n - 1; x += 2) {
        float64x2_t m = vsubq_f64(vld1q_f64(rm + x - 1), vw[0]);
        m = vminq_f64(m, vsubq_f64(vld1q_f64(rm + x), vw[1]));
        m = vminq_f64(m, vsubq_f64(vld1q_f64(rm + x + 1), vw[2]));
        m = vminq_f64(m, vsubq_f64(vld1q_f64(r0 + x - 1), vw[3]));
        m = vminq_f64(m, vsubq_f64(vld1q_f64(r0 + x), vw[4]));
        m = vminq_f64(m, vsubq_f64(vld1q_f64(r0 + x + 1), vw[5]));
        m = vminq_f64(m, vsubq_f64(vld1q_f64(rp + x - 1), vw[6]));
        m = vminq_f64(m, vsubq_f64(vld1q_f64(rp + x), vw[7]));
        m = vminq_f64(m, vsubq_f64(vld1q_f64(rp + x + 1), vw[8]));
        vst1q_f64(out + x, vminq_f64(vmaxq_f64(m, vlo), vhi));
    }
    for (; x + 1 < n; ++x) {
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

void stencil3x3_max_neon(double* out, const double* rm, const double* r0, const double* rp,
                         const double* w, double lo, double hi, std::size_t n) {
    const float64x2_t vlo = vdupq_n_f64(lo);
    const float64x2_t vhi = vdupq_n_f64(hi);
    float64x2_t vw[9];
    for (int k = 0; k < 9; ++k) vw[k] = vdupq_n_f64(w[k]);
    std::size_t x = 1;
    for (; x + 2 <= n - 1; x += 2) {
        float64x2_t m = vaddq_f64(vld1q_f64(rm + x - 1), vw[0]);
        m = vmaxq_f64(m, vaddq_f64(vld1q_f64(rm + x), vw[1]));
        m = vmaxq_f64(m, vaddq_f64(vld1q_f64(rm + x + 1), vw[2]));
        m = vmaxq_f64(m, vaddq_f64(vld1q_f64(r0 + x - 1), vw[3]));
        m = vmaxq_f64(m, vaddq_f64(vld1q_f64(r0 + x), vw[4]));
        m = vmaxq_f64(m, vaddq_f64(vld1q_f64(r0 + x + 1), vw[5]));
        m = vmaxq_f64(m, vaddq_f64(vld1q_f64(rp + x - 1), vw[6]));
        m = vmaxq_f64(m, vaddq_f64(vld1q_f64(rp + x), vw[7]));
        m = vmaxq_f64(m, vaddq_f64(vld1q_f64(rp + x + 1), vw[8]));
        vst1q_f64(out + x, vminq_f64(vmaxq_f64(m, vlo), vhi));
    }
    for (; x + 1 < n; ++x) {
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

void minmax_neon(const double* a, std::size_t n, double* mn, double* mx) {
    if (n < 4) {
        double lo = a[0], hi = a[0];
        for (std::size_t i = 1; i < n; ++i) {
            lo = std::min(lo, a[i]);
            hi = std::max(hi, a[i]);
        }
        *mn = lo;
        *mx = hi;
        return;
    }
    float64x2_t vlo = vld1q_f64(a);
    float64x2_t vhi = vlo;
    std::size_t i = 2;
    for (; i + 2 <= n; i += 2) {
        float64x2_t v = vld1q_f64(a + i);
        vlo = vminq_f64(vlo, v);
        vhi = vmaxq_f64(vhi, v);
    }
    double lo = std::min(vgetq_lane_f64(vlo, 0), vgetq_lane_f64(vlo, 1));
    double hi = std::max(vgetq_lane_f64(vhi, 0), vgetq_lane_f64(vhi, 1));
    for (; i < n; ++i) {
        lo = std::min(lo, a[i]);
        hi = std::max(hi, a[i]);
    }
    *mn = lo;
    *mx = hi;
}

double sum_sq_diff_neon(const double* a, const double* b, std::size_t n) {
    // Two vector accumulators covering lanes {0,1} and {2,3} of the pinned
    // 4-accumulator layout used by the scalar reference.
    float64x2_t v01 = vdupq_n_f64(0.0);
    float64x2_t v23 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        float64x2_t d0 = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        float64x2_t d1 = vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
        v01 = vaddq_f64(v01, vmulq_f64(d0, d0));
        v23 = vaddq_f64(v23, vmulq_f64(d1, d1));
    }
    double acc[4] = {vgetq_lane_f64(v01, 0), vgetq_lane_f64(v01, 1), vgetq_lane_f64(v23, 0),
                     vgetq_lane_f64(v23, 1)};
    for (; i < n; ++i) {
        double d = a[i] - b[i];
        acc[i % 4] = acc[i % 4] + d * d;
    }
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

void threshold_gt_neon(double* out, const double* a, double t, std::size_t n) {
    const float64x2_t vt = vdupq_n_f64(t);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t v = vld1q_f64(a + i);
        uint64x2_t keep = vcgtq_f64(v, vt);
        float64x2_t r = vreinterpretq_f64_u64(vandq_u64(vreinterpretq_u64_f64(v), keep));
        vst1q_f64(out + i, r);
    }
    for (; i < n; ++i) out[i] = a[i] > t ? a[i] : 0.0;
}

void shift_scale_neon(double* out, const double* a, double shift, double scale, std::size_t n) {
    const float64x2_t vsh = vdupq_n_f64(shift);
    const float64x2_t vsc = vdupq_n_f64(scale);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t v = vmulq_f64(vaddq_f64(vld1q_f64(a + i), vsh), vsc);
        vst1q_f64(out + i, v);
    }
    for (; i < n; ++i) out[i] = (a[i] + shift) * scale;
}

}  // namespace

const KernelTable kNeonTable = {
    axpby_neon,        axpy_neon,          mag2_neon,         mag3_neon,
    stencil3x3_min_neon, stencil3x3_max_neon, minmax_neon,
    sum_sq_diff_neon,  threshold_gt_neon,  shift_scale_neon,  "neon",
};

}  // namespace edbsw::kernels

#endif  // __aarch64__
