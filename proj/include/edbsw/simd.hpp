#pragma once

#include <cstddef>

// Runtime-dispatched kernels for the per-pixel inner loops. Every kernel has
// a scalar reference implementation and (where the build targets support it)
// an AVX2 or NEON variant. All variants are written to produce bit-identical
// results: identical operation order per element, no FMA contraction, and the
// reduction kernels use a fixed 4-accumulator scheme in both paths.

namespace edbsw::kernels {

enum class Isa { scalar, avx2, neon };

struct KernelTable {
    // out[i] = alpha*a[i] + beta*b[i]
    void (*axpby)(double* out, const double* a, const double* b, double alpha, double beta,
                  std::size_t n);
    // acc[i] += s*x[i]
    void (*axpy)(double* acc, const double* x, double s, std::size_t n);
    // out[i] = sqrt(x[i]^2 + y[i]^2)
    void (*mag2)(double* out, const double* x, const double* y, std::size_t n);
    // out[i] = sqrt((a[i]^2 + b[i]^2) + c[i]^2)
    void (*mag3)(double* out, const double* a, const double* b, const double* c, std::size_t n);
    // Weighted 3x3 min/max stencils over a full 3x3 domain, interior columns
    // only (x in [1, n-2]); border columns are the caller's job. w holds the
    // nine weights row-major (dy=-1..1, dx=-1..1). min form computes
    // clamp(min(r[dy][x+dx] - w), lo, hi); max form clamp(max(r[dy][x+dx] + w), lo, hi).
    void (*stencil3x3_min)(double* out, const double* rm, const double* r0, const double* rp,
                           const double* w, double lo, double hi, std::size_t n);
    void (*stencil3x3_max)(double* out, const double* rm, const double* r0, const double* rp,
                           const double* w, double lo, double hi, std::size_t n);
    // *mn/*mx = min/max over a[0..n)
    void (*minmax)(const double* a, std::size_t n, double* mn, double* mx);
    // sum of (a[i]-b[i])^2 with the pinned 4-lane accumulation order
    double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);
    // out[i] = a[i] > t ? a[i] : 0
    void (*threshold_gt)(double* out, const double* a, double t, std::size_t n);
    // out[i] = (a[i] + shift) * scale
    void (*shift_scale)(double* out, const double* a, double shift, double scale, std::size_t n);
    const char* name;
};

// Active table. Chosen once from CPU features, overridable by the EDBSW_SIMD
// environment variable ("scalar", "avx2", "neon", "auto") read at first use.
const KernelTable& active();
Isa active_isa();

bool isa_available(Isa isa);

// Test hook: force a specific implementation. Throws ParamError when the ISA
// is not available on this machine.
void force_isa(Isa isa);

// Direct access to specific tables (for equivalence tests).
const KernelTable& table_for(Isa isa);

}  // namespace edbsw::kernels
