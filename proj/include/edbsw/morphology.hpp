#pragma once

#include <array>
#include <string>

#include "edbsw/grid.hpp"

namespace edbsw {

// 3x3 non-flat structuring element.  weights/domain are row-major over
// (dy, dx) in {-1,0,1}^2; domain entries mark which offsets participate.
struct StructuringElement {
    std::array<double, 9> weights{};
    std::array<bool, 9> domain{};
    std::string name;
};

struct MorphConfig {
    double mu = 2.0;          // weight amplifier for the directional elements
    double range_lo = 0.0;    // working intensity range; the printed weights
    double range_hi = 255.0;  // only make sense against 8-bit magnitudes
    // Ablation switch: treat the zero entries of the cross/diagonal elements
    // as excluded from the domain instead of weight-0 members (the default
    // follows the printed matrices literally).
    bool zero_weights_excluded = false;
};

struct BuiltinElements {
    StructuringElement l1;  // dense blob, weights up to 2*mu
    StructuringElement l2;  // cross
    StructuringElement l3;  // diagonals
    StructuringElement lh;  // Laplacian-shaped, never scaled by mu
};

BuiltinElements builtin_elements(const MorphConfig& cfg = {});

// All weights zero over the full 3x3 domain (used for reconstruction).
StructuringElement flat3x3();

// Non-flat grayscale erosion/dilation with replicate boundary extension and
// the result clamped to [lo, hi].  Dilation mirrors the element, so an
// asymmetric element satisfies the adjunction dilate(-g, mirrored) =
// -erode(g, se) before clamping.
ImageGrid erode(const ImageGrid& g, const StructuringElement& se,
                double lo = 0.0, double hi = 255.0);
ImageGrid dilate(const ImageGrid& g, const StructuringElement& se,
                 double lo = 0.0, double hi = 255.0);

// erosion followed by dilation with the same element
ImageGrid open(const ImageGrid& g, const StructuringElement& se,
               double lo = 0.0, double hi = 255.0);

// Multi-structure anti-noise operator: m = erode(dilate(g, l1), l2), then
// open(m, l3) - erode(m, l3).  The input lives in [0,1], is lifted onto the
// working range for the morphology, and the response is min-shifted and
// max-normalized back to [0,1].
ImageGrid anti_noise(const ImageGrid& g, const MorphConfig& cfg = {});

// Morphological gradient with the Laplacian-shaped element:
// dilate(g, lh) - erode(g, lh), same lifting and renormalization as
// anti_noise (the raw gradient of a constant is a positive plateau that the
// min-shift removes).
ImageGrid refine(const ImageGrid& g, const MorphConfig& cfg = {});

// Geodesic reconstruction: iterate g_i = min(dilate(g_{i-1}, se), mask) from
// the marker until the pointwise change drops below 1e-9; throws
// ConvergenceError (carrying the residual) if height*width sweeps are not
// enough.
ImageGrid reconstruct(const ImageGrid& marker, const ImageGrid& mask,
                      const StructuringElement& se, double lo = 0.0,
                      double hi = 255.0);

// alpha*a + (1-alpha)*b, alpha in [0,1]
ImageGrid weighted_fuse(const ImageGrid& a, const ImageGrid& b, double alpha);

}  // namespace edbsw
