#pragma once

#include <optional>
#include <string>

#include "edbsw/grid.hpp"
#include "edbsw/pipeline.hpp"

namespace edbsw {

struct BaselineParams {
    // Applied to the max-normalized magnitude when set; otherwise the
    // midpoint threshold rule runs. Must lie in [0,1].
    std::optional<double> threshold;
    double canny_sigma = 1.0;
    // Hysteresis rails as fractions of the suppressed-gradient maximum.
    double canny_low = 0.1;
    double canny_high = 0.2;
    std::string wtmm_bank = "haar";
};

// Classical 3x3 gradient operators: magnitude of the two kernel responses,
// max-normalized, then thresholded (borders carry no response).
EdgeMap sobel(const ImageGrid& img, const BaselineParams& params = {});
EdgeMap prewitt(const ImageGrid& img, const BaselineParams& params = {});

// Gaussian smoothing (kernel radius ceil(3*sigma), replicate borders),
// Sobel gradient, four-direction suppression, then double threshold with
// 8-connected hysteresis. Output is binary {0,1}.
EdgeMap canny(const ImageGrid& img, const BaselineParams& params = {});

// Wavelet-transform modulus maxima: one-level decomposition with
// params.wtmm_bank, combined detail modulus, suppression, midpoint
// threshold, then nearest-neighbor upsampling back to the input size.
EdgeMap wtmm(const ImageGrid& img, const BaselineParams& params = {});

// Dispatch by operator name ("sobel", "prewitt", "canny", "wtmm");
// unknown names raise LookupError.
EdgeMap run_baseline(const std::string& name, const ImageGrid& img,
                     const BaselineParams& params = {});

}  // namespace edbsw
