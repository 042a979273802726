#include "edbsw/simd.hpp"

#include "kernels_tables.hpp"

// AVX2 kernel variants. This translation unit is compiled with
// -mavx2 -mno-fma (see CMakeLists.txt); everything else in the library stays
// on the baseline target. Each kernel performs the same IEEE operations in
// the same per-element order as the scalar reference, so results match
// bit-for-bit — the equivalence tests enforce that.

#if defined(__x86_64__) && defined(__AVX2__)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace edbsw::kernels {
namespace {

void axpby_avx2(double* out, const double* a, const double* b, double alpha, double beta,
                std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    const __m256d vb = _mm256_set1_pd(beta);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xa = _mm256_mul_pd(va, _mm256_loadu_pd(a + i));
        __m256d xb = _mm256_mul_pd(vb, _mm256_loadu_pd(b + i));
        _mm256_storeu_pd(out + i, _mm256_add_pd(xa, xb));
    }
    for (; i < n; ++i) out[i] = alpha * a[i] + beta * b[i];
}

void axpy_avx2(double* acc, const double* x, double s, std::size_t n) {
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_add_pd(_mm256_loadu_pd(acc + i),
                                  _mm256_mul_pd(vs, _mm256_loadu_pd(x + i)));
        _mm256_storeu_pd(acc + i, v);
    }
    for (; i < n; ++i) acc[i] = acc[i] + s * x[i];
}

void mag2_avx2(double* out, const double* x, const double* y, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vx = _mm256_loadu_pd(x + i);
        __m256d vy = _mm256_loadu_pd(y + i);
        __m256d s = _mm256_add_pd(_mm256_mul_pd(vx, vx), _mm256_mul_pd(vy, vy));
        _mm256_storeu_pd(out + i, _mm256_sqrt_pd(s));
    }
    for (; i < n; ++i) out[i] = std::sqrt(x[i] * x[i] + y[i] * y[i]);
}

void mag3_avx2(double* out, const double* a, const double* b, const double* c, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d va = _mm256_loadu_pd(a + i);
        __m256d vb = _mm256_loadu_pd(b + i);
        __m256d vc = _mm256_loadu_pd(c + i);
        __m256d s = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(va, va), _mm256_mul_pd(vb, vb)),
                                  _mm256_mul_pd(vc, vc));
        _mm256_storeu_pd(out + i, _mm256_sqrt_pd(s));
    }
    for (; i < n; ++i) out[i] = std::sqrt((a[i] * a[i] + b[i] * b[i]) + c[i] * c[i]);
}

// min/max are exact (no rounding), so vector lane order is immaterial for
// bit-identity; inputs are finite by contract.
void stencil3x3_min_avx2(double* out, const double* rm, const double* r0, const double* rp,
                         const double* w, double lo, double hi, std::size_t n) {
    const __m256d vlo = _mm256_set1_pd(lo);
    const __m256d vhi = _mm256_set1_pd(hi);
    __m256d vw[9];
    for (int k = 0; k < 9; ++k) vw[k] = _mm256_set1_pd(w[k]);
    std::size_t x = 1;
    for (; x + 4 <= n - 1; x += 4) {
        __m256d m = _mm256_sub_pd(_mm256_loadu_pd(rm + x - 1), vw[0]);
        m = _mm256_min_pd(m, _mm256_sub_pd(_mm256_loadu_pd(rm + x), vw[1]));
        m = _mm256_min_pd(m, _mm256_sub_pd(_mm256_loadu_pd(rm + x + 1), vw[2]));
        m = _mm256_min_pd(m, _mm256_sub_pd(_mm256_loadu_pd(r0 + x - 1), vw[3]));
        m = _mm256_min_pd(m, _mm256_sub_pd(_mm256_loadu_pd(r0 + x), vw[4]));
        m = _mm256_min_pd(m, _mm256_sub_pd(_mm256_loadu_pd(r0 + x + 1), vw[5]));
        m = _mm256_min_pd(m, _mm256_sub_pd(_mm256_loadu_pd(rp + x - 1), vw[6]));
        m = _mm256_min_pd(m, _mm256_sub_pd(_mm256_loadu_pd(rp + x), vw[7]));
        m = _mm256_min_pd(m, _mm256_sub_pd(_mm256_loadu_pd(rp + x + 1), vw[8]));
        _mm256_storeu_pd(out + x, _mm256_min_pd(_mm256_max_pd(m, vlo), vhi));
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

void stencil3x3_max_avx2(double* out, const double* rm, const double* r0, const double* rp,
                         const double* w, double lo, double hi, std::size_t n) {
    const __m256d vlo = _mm256_set1_pd(lo);
    const __m256d vhi = _mm256_set1_pd(hi);
    __m256d vw[9];
    for (int k = 0; k < 9; ++k) vw[k] = _mm256_set1_pd(w[k]);
    std::size_t x = 1;
    for (; x + 4 <= n - 1; x += 4) {
        __m256d m = _mm256_add_pd(_mm256_loadu_pd(rm + x - 1), vw[0]);
        m = _mm256_max_pd(m, _mm256_add_pd(_mm256_loadu_pd(rm + x), vw[1]));
        m = _mm256_max_pd(m, _mm256_add_pd(_mm256_loadu_pd(rm + x + 1), vw[2]));
        m = _mm256_max_pd(m, _mm256_add_pd(_mm256_loadu_pd(r0 + x - 1), vw[3]));
        m = _mm256_max_pd(m, _mm256_add_pd(_mm256_loadu_pd(r0 + x), vw[4]));
        m = _mm256_max_pd(m, _mm256_add_pd(_mm256_loadu_pd(r0 + x + 1), vw[5]));
        m = _mm256_max_pd(m, _mm256_add_pd(_mm256_loadu_pd(rp + x - 1), vw[6]));
        m = _mm256_max_pd(m, _mm256_add_pd(_mm256_loadu_pd(rp + x), vw[7]));
        m = _mm256_max_pd(m, _mm256_add_pd(_mm256_loadu_pd(rp + x + 1), vw[8]));
        _mm256_storeu_pd(out + x, _mm256_min_pd(_mm256_max_pd(m, vlo), vhi));
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

void minmax_avx2(const double* a, std::size_t n, double* mn, double* mx) {
    if (n < 8) {
        double lo = a[0], hi = a[0];
        for (std::size_t i = 1; i < n; ++i) {
            lo = std::min(lo, a[i]);
            hi = std::max(hi, a[i]);
        }
        *mn = lo;
        *mx = hi;
        return;
    }
    __m256d vlo = _mm256_loadu_pd(a);
    __m256d vhi = vlo;
    std::size_t i = 4;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(a + i);
        vlo = _mm256_min_pd(vlo, v);
        vhi = _mm256_max_pd(vhi, v);
    }
    alignas(32) double tlo[4], thi[4];
    _mm256_store_pd(tlo, vlo);
    _mm256_store_pd(thi, vhi);
    double lo = std::min(std::min(tlo[0], tlo[1]), std::min(tlo[2], tlo[3]));
    double hi = std::max(std::max(thi[0], thi[1]), std::max(thi[2], thi[3]));
    for (; i < n; ++i) {
        lo = std::min(lo, a[i]);
        hi = std::max(hi, a[i]);
    }
    *mn = lo;
    *mx = hi;
}

double sum_sq_diff_avx2(const double* a, const double* b, std::size_t n) {
    __m256d vacc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        vacc = _mm256_add_pd(vacc, _mm256_mul_pd(d, d));
    }
    // Same tail handling and final combine as the scalar reference: lane j of
    // the vector accumulator holds exactly the scalar acc[j].
    alignas(32) double acc[4];
    _mm256_store_pd(acc, vacc);
    for (; i < n; ++i) {
        double d = a[i] - b[i];
        acc[i % 4] = acc[i % 4] + d * d;
    }
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

void threshold_gt_avx2(double* out, const double* a, double t, std::size_t n) {
    const __m256d vt = _mm256_set1_pd(t);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(a + i);
        __m256d keep = _mm256_cmp_pd(v, vt, _CMP_GT_OQ);
        _mm256_storeu_pd(out + i, _mm256_and_pd(v, keep));
    }
    for (; i < n; ++i) out[i] = a[i] > t ? a[i] : 0.0;
}

void shift_scale_avx2(double* out, const double* a, double shift, double scale, std::size_t n) {
    const __m256d vsh = _mm256_set1_pd(shift);
    const __m256d vsc = _mm256_set1_pd(scale);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_mul_pd(_mm256_add_pd(_mm256_loadu_pd(a + i), vsh), vsc);
        _mm256_storeu_pd(out + i, v);
    }
    for (; i < n; ++i) out[i] = (a[i] + shift) * scale;
}

}  // namespace

const KernelTable kAvx2Table = {
    axpby_avx2,        axpy_avx2,          mag2_avx2,         mag3_avx2,
    stencil3x3_min_avx2, stencil3x3_max_avx2, minmax_avx2,
    sum_sq_diff_avx2,  threshold_gt_avx2,  shift_scale_avx2,  "avx2",
};

}  // namespace edbsw::kernels

#endif  // __x86_64__ && __AVX2__
