#pragma once

#include <utility>
#include <vector>

#include "edbsw/dwt2d.hpp"
#include "edbsw/grid.hpp"

namespace edbsw {

// Cx/Cy are horizontal/vertical derivative estimates, modulus their
// pointwise magnitude, angle = arctan(Cy/Cx) in (-pi/2, pi/2] with the
// degenerate conventions: pi/2 for a purely vertical gradient, 0 where both
// derivatives vanish.
struct GradientField {
    ImageGrid Cx;
    ImageGrid Cy;
    ImageGrid modulus;
    ImageGrid angle;
};

struct SelectorParams {
    double T = 0.05;       // deviation tolerance of the selector gates
    int window_h = 7;      // odd, >= 3
    int window_w = 7;
    int stride_y = 0;      // 0 = floor(window/2)
    int stride_x = 0;
    // Mean gate mu_D in (mean_lo, mean_hi).  The literal reading uses
    // (0, T), which rejects nearly every natural-image window; the shipped
    // default disables the upper bound.
    double mean_lo = 0.0;
    double mean_hi = 1.0;

    int resolved_stride_y() const { return stride_y > 0 ? stride_y : window_h / 2; }
    int resolved_stride_x() const { return stride_x > 0 ? stride_x : window_w / 2; }
};

// Per-window selector statistics, exposed for diagnostics and tests.  mu_E
// (mean of the combined detail modulus) is computed but never gated on.
struct WindowStat {
    int y0 = 0;
    int x0 = 0;
    double mu_D = 0.0;
    double delta_D = 0.0;
    double delta_h = 0.0;
    double delta_v = 0.0;
    double delta_d = 0.0;
    double mu_E = 0.0;
    bool selected = false;
};

struct SelectedDetails {
    ImageGrid CH;
    ImageGrid CV;
    ImageGrid CD;
};

// Central differences on the interior, one-sided at the borders.  Needs at
// least 3x3 pixels.
GradientField gradient(const ImageGrid& img);

// Combined three-component modulus sqrt(cH^2 + cV^2 + cD^2) and the detail
// angle arctan(cH/cV) under the same degenerate conventions as gradient.
std::pair<ImageGrid, ImageGrid> modulus_highfreq(const ImageGrid& cH,
                                                 const ImageGrid& cV,
                                                 const ImageGrid& cD);

// Directional non-maximum suppression: the angle picks one of four neighbor
// pairs (two diagonal classes at pi/4 and 3pi/4, axis pairs for near-axis
// angles); a pixel survives only where its modulus strictly exceeds both
// neighbors.  Borders are suppressed.
ImageGrid nms(const ImageGrid& modulus, const ImageGrid& angle);

// T = (max + min)/2 of the grid; values > T survive, everything else is 0.
// The strict rule empties constant grids.
ImageGrid adaptive_threshold(const ImageGrid& modulus);

// Structural uncertainty-aware feature selection: slides a window over the
// subband lattice, gates it on the cA statistics (normality proxy, mean
// gate, per-component deviation bands), and inside selected windows runs the
// window-local gradient/modulus/angle/NMS chain on each signed detail
// component.  Overlapping selections merge by pointwise maximum; everything
// else stays 0.
SelectedDetails uncertainty_select(const WaveletDecomposition& dec,
                                   const SelectorParams& params,
                                   std::vector<WindowStat>* stats = nullptr);

}  // namespace edbsw
