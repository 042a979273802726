#pragma once

#include "edbsw/filterbank.hpp"
#include "edbsw/grid.hpp"

namespace edbsw {

struct WaveletDecomposition {
    ImageGrid cA;  // low x, low y
    ImageGrid cH;  // low x, high y  (horizontal detail)
    ImageGrid cV;  // high x, low y (vertical detail)
    ImageGrid cD;  // high x, high y
    // Size of the image that produced this decomposition, kept so the inverse
    // can crop away the one-sample symmetric padding added for odd sizes.
    // Zero means "twice the subband size" (hand-built decompositions).
    int orig_height = 0;
    int orig_width = 0;
};

// 2x bilinear upsampling to (2H x 2W).  Even outputs copy the source sample
// and odd outputs average the two neighbours (the final one clamps to the
// edge), so corner pixels reproduce the original corners and downsample2 is
// an exact left inverse.
ImageGrid upsample2(const ImageGrid& img);

// Keep the even lattice (0, 2, 4, ...) in both axes.  Requires height and
// width >= 2.
ImageGrid downsample2(const ImageGrid& img);

// One-level separable decomposition: rows are correlated with the analysis
// pair and dyadically downsampled, then columns likewise.  Each stage carries
// a factor 1/2 so a constant image c yields cA = c and zero details.  Odd
// axes are padded by one symmetric row/column first; subbands come out at
// ceil(H/2) x ceil(W/2).
WaveletDecomposition dwt2(const ImageGrid& img, const FilterBank& bank);

// Inverse transform: upsample the subbands, filter with the synthesis pair,
// sum the channels, and crop back to the original size.  Exact for
// exactly-biorthogonal banks.
ImageGrid idwt2(const WaveletDecomposition& dec, const FilterBank& bank);

}  // namespace edbsw
