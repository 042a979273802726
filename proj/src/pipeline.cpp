#include "edbsw/pipeline.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <utility>

#include "edbsw/dwt2d.hpp"
#include "edbsw/errors.hpp"
#include "edbsw/filterbank.hpp"
#include "edbsw/simd.hpp"

namespace edbsw {

namespace {

using Clock = std::chrono::steady_clock;

// Runs one stage, records its wall time, and re-labels any failure with the
// stage name so a config problem deep in the flow is attributable.
template <typename Fn>
auto run_stage(PipelineTrace& trace, const char* name, Fn&& fn) {
    const auto t0 = Clock::now();
    try {
        auto result = fn();
        const std::chrono::duration<double, std::milli> dt = Clock::now() - t0;
        trace.timings.push_back({name, dt.count()});
        return result;
    } catch (const PipelineError&) {
        throw;
    } catch (const std::exception& e) {
        throw PipelineError(name, e.what());
    }
}

ImageGrid pointwise_max(const ImageGrid& a, const ImageGrid& b) {
    require_same_size(a, b, "pipeline mask fusion");
    ImageGrid out(a.height, a.width);
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        out.data[i] = std::max(a.data[i], b.data[i]);
    }
    return out;
}

ImageGrid pointwise_min(const ImageGrid& a, const ImageGrid& b) {
    require_same_size(a, b, "pipeline marker clip");
    ImageGrid out(a.height, a.width);
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        out.data[i] = std::min(a.data[i], b.data[i]);
    }
    return out;
}

ImageGrid mean3(const ImageGrid& a, const ImageGrid& b, const ImageGrid& c) {
    require_same_size(a, b, "pipeline mask fusion");
    require_same_size(a, c, "pipeline mask fusion");
    ImageGrid out(a.height, a.width);
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        out.data[i] = (a.data[i] + b.data[i] + c.data[i]) / 3.0;
    }
    return out;
}

ImageGrid abs_grid(const ImageGrid& g) {
    ImageGrid out(g.height, g.width);
    for (std::size_t i = 0; i < g.data.size(); ++i) {
        out.data[i] = std::abs(g.data[i]);
    }
    return out;
}

// modulus maxima + adaptive threshold, rescaled so the surviving peaks top
// out at 1 and stay comparable across the two mask branches
ImageGrid maxima_map(const ImageGrid& modulus, const ImageGrid& angle) {
    return normalize_by_max(adaptive_threshold(nms(modulus, angle)));
}

// Full-grid fallback for the selector ablation: the same per-component
// gradient -> suppression chain, applied everywhere instead of per window.
ImageGrid suppress_full(const ImageGrid& subband) {
    const GradientField gf = gradient(subband);
    return nms(gf.modulus, gf.angle);
}

void validate_input(const ImageGrid& img, const PipelineConfig& cfg) {
    if (std::min(img.height, img.width) < 16) {
        throw DimensionError("edbsw_detect: input must be at least 16x16");
    }
    if (!all_finite(img)) {
        throw DomainError("edbsw_detect: input contains non-finite values");
    }
    if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) {
        throw ParamError("edbsw_detect: alpha must lie in [0,1]");
    }
}

}  // namespace

std::pair<EdgeMap, PipelineTrace> edbsw_detect(const ImageGrid& img,
                                               const PipelineConfig& cfg) {
    validate_input(img, cfg);
    PipelineTrace trace;

    const FilterBank bank = run_stage(trace, "resolve-wavelet", [&] {
        return bank_by_name(cfg.wavelet.name, cfg.wavelet.L, cfg.wavelet.degree,
                            cfg.wavelet.taps);
    });

    const ImageGrid up =
        run_stage(trace, "upsample", [&] { return upsample2(img); });
    const WaveletDecomposition dec =
        run_stage(trace, "decompose", [&] { return dwt2(up, bank); });

    // branch 1: anti-noise morphology on the approximation band
    if (!cfg.ablation.disable_branch1) {
        trace.E_d = run_stage(trace, "anti-noise",
                              [&] { return anti_noise(dec.cA, cfg.morph); });
    }

    // branch 2: modulus maxima on the approximation gradient and on the
    // combined detail bands, fused into the mask
    trace.E_l = run_stage(trace, "low-band-maxima", [&] {
        const GradientField gf = gradient(dec.cA);
        return maxima_map(gf.modulus, gf.angle);
    });
    if (!cfg.ablation.disable_branch2) {
        trace.E_h = run_stage(trace, "high-band-maxima", [&] {
            const auto [mod, ang] = modulus_highfreq(dec.cH, dec.cV, dec.cD);
            return maxima_map(mod, ang);
        });
    }
    trace.E_m = run_stage(trace, "fuse-mask", [&] {
        ImageGrid mask = cfg.ablation.disable_branch2
                             ? trace.E_l
                             : weighted_fuse(trace.E_h, trace.E_l, cfg.alpha);
        if (cfg.ablation.disable_branch1) return mask;
        switch (cfg.ed_fusion) {
            case EdFusion::kMax:
                return pointwise_max(mask, trace.E_d);
            case EdFusion::kIgnore:
                return mask;
            case EdFusion::kThreeWayAverage:
                return mean3(cfg.ablation.disable_branch2 ? trace.E_l : trace.E_h,
                             trace.E_l, trace.E_d);
        }
        return mask;
    });

    // branch 3: uncertainty-gated suppression of the detail subbands,
    // reconstruction of the surviving coefficients, morphological refinement
    run_stage(trace, "select", [&] {
        if (cfg.ablation.disable_selector) {
            trace.CH = suppress_full(dec.cH);
            trace.CV = suppress_full(dec.cV);
            trace.CD = suppress_full(dec.cD);
        } else {
            SelectedDetails sel = uncertainty_select(dec, cfg.selector);
            trace.CH = std::move(sel.CH);
            trace.CV = std::move(sel.CV);
            trace.CD = std::move(sel.CD);
        }
        return 0;
    });

    const auto [tH, tV, tD] = run_stage(trace, "threshold-subbands", [&] {
        return std::array{adaptive_threshold(trace.CH),
                          adaptive_threshold(trace.CV),
                          adaptive_threshold(trace.CD)};
    });
    trace.M_f = run_stage(trace, "combine-modulus", [&] {
        ImageGrid mf(tH.height, tH.width);
        kernels::active().mag3(mf.data.data(), tH.data.data(), tV.data.data(),
                               tD.data.data(), mf.data.size());
        return mf;
    });

    trace.E_r = run_stage(trace, "reconstruct-details", [&] {
        WaveletDecomposition kept;
        kept.cA = ImageGrid(dec.cA.height, dec.cA.width, 0.0);
        kept.cH = tH;
        kept.cV = tV;
        kept.cD = tD;
        kept.orig_height = up.height;
        kept.orig_width = up.width;
        // the detail-only reconstruction is signed; keep its energy and
        // rescale so the refinement stage sees a [0,1] map
        return normalize_by_max(abs_grid(downsample2(idwt2(kept, bank))));
    });

    trace.F_d = run_stage(trace, "refine",
                          [&] { return refine(trace.E_r, cfg.morph); });

    trace.G = run_stage(trace, "geodesic-reconstruct", [&] {
        const ImageGrid marker = pointwise_min(trace.F_d, trace.E_m);
        return reconstruct(marker, trace.E_m, flat3x3());
    });

    trace.E_u = run_stage(trace, "fuse-final", [&] {
        return normalize_by_max(weighted_fuse(trace.G, trace.E_m, cfg.alpha));
    });

    return {trace.E_u, std::move(trace)};
}

EdgeMap ablate(const ImageGrid& img, const PipelineConfig& cfg) {
    return edbsw_detect(img, cfg).first;
}

}  // namespace edbsw
