#pragma once

#include <string>

#include "edbsw/grid.hpp"

namespace edbsw {

struct MetricsReport {
    double mse = 0.0;
    double psnr_db = 0.0;  // +infinity when the inputs are identical
    double ssim = 0.0;
    double entropy = 0.0;
    std::string operator_name;
    std::string image_id;
};

// Mean of squared pixel differences.
double mse(const ImageGrid& a, const ImageGrid& b);

// 10*log10(peak^2 / mse) with peak = 1; identical inputs give +infinity.
double psnr(const ImageGrid& a, const ImageGrid& b);

// Mean structural similarity over 8x8 windows at stride 1, with the usual
// (0.01, 0.03) stabilizers against peak 1 and population window statistics.
double ssim(const ImageGrid& a, const ImageGrid& b);

// Binary Shannon entropy of the edge fraction (a pixel is an edge iff its
// value is strictly positive); 0 and 1 fractions give 0.
double entropy(const ImageGrid& edge);

// Alternative definition: Shannon entropy of a 256-bin histogram over [0,1],
// normalized by 8 bits so the result stays in [0,1].
double entropy_hist256(const ImageGrid& edge);

// Convenience bundle: mse/psnr/ssim against the reference plus the
// candidate's entropy; identity fields are left for the caller.
MetricsReport evaluate_pair(const ImageGrid& reference,
                            const ImageGrid& candidate);

}  // namespace edbsw
