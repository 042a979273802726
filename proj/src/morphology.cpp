#include "edbsw/morphology.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "edbsw/errors.hpp"
#include "edbsw/simd.hpp"

namespace edbsw {

namespace {

// Sentinel weight for excluded offsets.  The stencil kernels have no notion
// of a domain mask, so an excluded entry is encoded as a weight so negative
// that g - w can never win the min and g + w can never win the max, while
// staying far from double overflow.
constexpr double kExcludedWeight = -1e300;

std::array<double, 9> effective_weights(const StructuringElement& se,
                                        bool mirror) {
    std::array<double, 9> w{};
    for (int i = 0; i < 9; ++i) {
        const int src = mirror ? 8 - i : i;
        w[i] = se.domain[src] ? se.weights[src] : kExcludedWeight;
    }
    return w;
}

void validate_element(const StructuringElement& se, const char* where) {
    for (bool d : se.domain) {
        if (d) return;
    }
    throw ParamError(std::string(where) + ": structuring element '" + se.name +
                     "' has an empty domain");
}

// Shared min/max stencil sweep: replicate rows are handled by clamping the
// row pointers, interior columns go through the SIMD kernel, and the two
// border columns replicate horizontally in scalar code.
ImageGrid morph_apply(const ImageGrid& g, const std::array<double, 9>& w,
                      bool take_min, double lo, double hi) {
    if (g.height < 1 || g.width < 1) {
        throw DimensionError("morphology needs a non-empty grid");
    }
    ImageGrid out(g.height, g.width);
    const auto& k = kernels::active();
    const int last = g.width - 1;
    for (int y = 0; y < g.height; ++y) {
        const double* rm = g.row(y > 0 ? y - 1 : 0);
        const double* r0 = g.row(y);
        const double* rp = g.row(y + 1 < g.height ? y + 1 : g.height - 1);
        double* o = out.row(y);
        if (g.width >= 3) {
            if (take_min) {
                k.stencil3x3_min(o, rm, r0, rp, w.data(), lo, hi, g.width);
            } else {
                k.stencil3x3_max(o, rm, r0, rp, w.data(), lo, hi, g.width);
            }
        }
        const std::array<const double*, 3> rows = {rm, r0, rp};
        for (int x = 0; x <= last; x += (last > 0 ? last : 1)) {
            double best = take_min ? std::numeric_limits<double>::infinity()
                                   : -std::numeric_limits<double>::infinity();
            for (int dy = 0; dy < 3; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const int xx = std::clamp(x + dx, 0, last);
                    const double wv = w[dy * 3 + (dx + 1)];
                    const double v =
                        take_min ? rows[dy][xx] - wv : rows[dy][xx] + wv;
                    best = take_min ? std::min(best, v) : std::max(best, v);
                }
            }
            o[x] = std::clamp(best, lo, hi);
            if (last == 0) break;
        }
    }
    return out;
}

void validate_range(const MorphConfig& cfg, const char* where) {
    if (!(cfg.range_hi > cfg.range_lo)) {
        throw ParamError(std::string(where) + ": range_hi must exceed range_lo");
    }
}

// Lift a [0,1] response onto the working intensity range.
ImageGrid lift(const ImageGrid& g, const MorphConfig& cfg) {
    ImageGrid out(g.height, g.width);
    const double span = cfg.range_hi - cfg.range_lo;
    kernels::active().shift_scale(out.data.data(), g.data.data(),
                                  cfg.range_lo / span, span, g.size());
    return out;
}

ImageGrid difference(const ImageGrid& a, const ImageGrid& b) {
    require_same_size(a, b, "morphology difference");
    ImageGrid out(a.height, a.width);
    kernels::active().axpby(out.data.data(), a.data.data(), b.data.data(), 1.0,
                            -1.0, a.size());
    return out;
}

StructuringElement make_element(const char* name, std::array<double, 9> base,
                                double scale, bool zeros_excluded) {
    StructuringElement se;
    se.name = name;
    for (int i = 0; i < 9; ++i) {
        se.weights[i] = base[i] * scale;
        se.domain[i] = !(zeros_excluded && base[i] == 0.0);
    }
    return se;
}

}  // namespace

BuiltinElements builtin_elements(const MorphConfig& cfg) {
    if (!(cfg.mu > 0.0)) {
        throw ParamError("builtin_elements: mu must be positive");
    }
    BuiltinElements el;
    el.l1 = make_element("l1",
                         {0.5, 1.0, 0.5,  //
                          1.0, 2.0, 1.0,  //
                          0.5, 1.0, 0.5},
                         cfg.mu, cfg.zero_weights_excluded);
    el.l2 = make_element("l2",
                         {0.0, 0.5, 0.0,  //
                          0.5, 0.5, 0.5,  //
                          0.0, 0.5, 0.0},
                         cfg.mu, cfg.zero_weights_excluded);
    el.l3 = make_element("l3",
                         {0.5, 0.0, 0.5,  //
                          0.0, 0.5, 0.0,  //
                          0.5, 0.0, 0.5},
                         cfg.mu, cfg.zero_weights_excluded);
    // The Laplacian-shaped element keeps its printed weights at every mu and
    // has no zero entries to exclude.
    el.lh = make_element("lh",
                         {-1.0, -1.0, -1.0,  //
                          -1.0, 8.0, -1.0,   //
                          -1.0, -1.0, -1.0},
                         1.0, false);
    return el;
}

StructuringElement flat3x3() {
    StructuringElement se;
    se.name = "flat3x3";
    se.weights.fill(0.0);
    se.domain.fill(true);
    return se;
}

ImageGrid erode(const ImageGrid& g, const StructuringElement& se, double lo,
                double hi) {
    validate_element(se, "erode");
    return morph_apply(g, effective_weights(se, false), true, lo, hi);
}

ImageGrid dilate(const ImageGrid& g, const StructuringElement& se, double lo,
                 double hi) {
    validate_element(se, "dilate");
    return morph_apply(g, effective_weights(se, true), false, lo, hi);
}

ImageGrid open(const ImageGrid& g, const StructuringElement& se, double lo,
               double hi) {
    return dilate(erode(g, se, lo, hi), se, lo, hi);
}

ImageGrid anti_noise(const ImageGrid& g, const MorphConfig& cfg) {
    validate_range(cfg, "anti_noise");
    const BuiltinElements el = builtin_elements(cfg);
    const double lo = cfg.range_lo;
    const double hi = cfg.range_hi;
    const ImageGrid work = lift(g, cfg);
    const ImageGrid m = erode(dilate(work, el.l1, lo, hi), el.l2, lo, hi);
    const ImageGrid raw =
        difference(open(m, el.l3, lo, hi), erode(m, el.l3, lo, hi));
    // A flat patch produces a constant positive plateau (the element is
    // non-flat); shifting by the minimum keeps only the structure on top.
    return normalize_min_max(raw);
}

ImageGrid refine(const ImageGrid& g, const MorphConfig& cfg) {
    validate_range(cfg, "refine");
    const BuiltinElements el = builtin_elements(cfg);
    const double lo = cfg.range_lo;
    const double hi = cfg.range_hi;
    const ImageGrid work = lift(g, cfg);
    const ImageGrid raw =
        difference(dilate(work, el.lh, lo, hi), erode(work, el.lh, lo, hi));
    return normalize_min_max(raw);
}

ImageGrid reconstruct(const ImageGrid& marker, const ImageGrid& mask,
                      const StructuringElement& se, double lo, double hi) {
    require_same_size(marker, mask, "reconstruct");
    validate_element(se, "reconstruct");
    ImageGrid g = marker;
    const long long cap =
        std::max(1LL, static_cast<long long>(g.height) * g.width);
    double residual = std::numeric_limits<double>::infinity();
    for (long long it = 0; it < cap; ++it) {
        ImageGrid next = dilate(g, se, lo, hi);
        residual = 0.0;
        for (std::size_t i = 0; i < next.data.size(); ++i) {
            const double clipped = std::min(next.data[i], mask.data[i]);
            residual = std::max(residual, std::abs(clipped - g.data[i]));
            next.data[i] = clipped;
        }
        g = std::move(next);
        if (residual < 1e-9) return g;
    }
    throw ConvergenceError("reconstruct: no fixed point within cap", residual);
}

ImageGrid weighted_fuse(const ImageGrid& a, const ImageGrid& b, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw ParamError("weighted_fuse: alpha must lie in [0,1]");
    }
    require_same_size(a, b, "weighted_fuse");
    ImageGrid out(a.height, a.width);
    kernels::active().axpby(out.data.data(), a.data.data(), b.data.data(),
                            alpha, 1.0 - alpha, a.size());
    return out;
}

}  // namespace edbsw
