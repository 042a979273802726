#pragma once

#include <string>
#include <utility>
#include <vector>

#include "edbsw/edgecore.hpp"
#include "edbsw/grid.hpp"
#include "edbsw/morphology.hpp"

namespace edbsw {

// Real-valued edge-strength raster in [0,1] (0 = non-edge).
using EdgeMap = ImageGrid;

// How the anti-noise branch's feature map enters the fused mask.
enum class EdFusion {
    kMax,              // pointwise max into the fused mask (default)
    kIgnore,           // leave the mask untouched
    kThreeWayAverage,  // replace the mask by mean(E_h, E_l, E_d)
};

struct Ablation {
    bool disable_branch1 = false;   // skip the anti-noise feature map
    bool disable_branch2 = false;   // mask falls back to the low-band map
    bool disable_selector = false;  // suppress everywhere, not per window
    bool any() const {
        return disable_branch1 || disable_branch2 || disable_selector;
    }
};

// Which bank drives the decomposition. "bcssw" is derived on the fly from
// (L, degree, taps); any other name resolves through standard_bank.
struct WaveletSpec {
    std::string name = "bcssw";
    int L = 4;
    int degree = 10;
    int taps = 15;
};

struct PipelineConfig {
    WaveletSpec wavelet;
    double alpha = 0.7;  // shared by the mask fusion and the final fusion
    SelectorParams selector;
    MorphConfig morph;
    Ablation ablation;
    EdFusion ed_fusion = EdFusion::kMax;
};

struct StageTiming {
    std::string stage;
    double ms = 0.0;
};

// Retained intermediates, one per stage of the flow; always populated unless
// an ablation skips the stage (skipped maps stay empty).
struct PipelineTrace {
    ImageGrid E_d;           // anti-noise feature map on the approximation
    ImageGrid E_h;           // thresholded high-frequency modulus maxima
    ImageGrid E_l;           // thresholded approximation-gradient maxima
    ImageGrid E_m;           // fused mask
    ImageGrid CH, CV, CD;    // suppressed detail subbands from the selector
    ImageGrid M_f;           // combined modulus of the thresholded subbands
    ImageGrid E_r;           // reconstructed high-frequency edge energy
    ImageGrid F_d;           // refined gradient of E_r
    ImageGrid G;             // geodesic reconstruction under the mask
    ImageGrid E_u;           // final fused edge map
    std::vector<StageTiming> timings;
};

// Full three-branch detection flow:
//   upsample -> dwt2 -> { anti-noise | modulus-maxima mask | selector +
//   reconstruction } -> geodesic reconstruction -> weighted fusion.
// The input is a grayscale raster nominally in [0,1] with min(H, W) >= 16.
std::pair<EdgeMap, PipelineTrace> edbsw_detect(const ImageGrid& img,
                                               const PipelineConfig& cfg = {});

// Same flow honoring cfg.ablation, returning only the final map. An empty
// ablation set reproduces edbsw_detect bit for bit.
EdgeMap ablate(const ImageGrid& img, const PipelineConfig& cfg);

}  // namespace edbsw
