#include "edbsw/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "edbsw/dwt2d.hpp"
#include "edbsw/edgecore.hpp"
#include "edbsw/errors.hpp"
#include "edbsw/filterbank.hpp"
#include "edbsw/simd.hpp"

namespace edbsw {

namespace {

// 3x3 correlation of both direction kernels -> magnitude and angle.
// Borders stay zero so the response is purely interior.
struct KernelGradient {
    ImageGrid modulus;
    ImageGrid angle;
};

KernelGradient kernel_gradient(const ImageGrid& g, double side) {
    if (g.height < 3 || g.width < 3) {
        throw DimensionError("gradient operator needs at least a 3x3 image");
    }
    KernelGradient out{ImageGrid(g.height, g.width), ImageGrid(g.height, g.width)};
    for (int y = 1; y + 1 < g.height; ++y) {
        const double* rm = g.row(y - 1);
        const double* r0 = g.row(y);
        const double* rp = g.row(y + 1);
        for (int x = 1; x + 1 < g.width; ++x) {
            const double gx = (rm[x + 1] + side * r0[x + 1] + rp[x + 1]) -
                              (rm[x - 1] + side * r0[x - 1] + rp[x - 1]);
            const double gy = (rp[x - 1] + side * rp[x] + rp[x + 1]) -
                              (rm[x - 1] + side * rm[x] + rm[x + 1]);
            out.modulus.at(y, x) = std::sqrt(gx * gx + gy * gy);
            if (gx == 0.0) {
                out.angle.at(y, x) = (gy == 0.0) ? 0.0 : 1.5707963267948966;
            } else {
                out.angle.at(y, x) = std::atan(gy / gx);
            }
        }
    }
    return out;
}

void validate_threshold(const std::optional<double>& t) {
    if (t && !(*t >= 0.0 && *t <= 1.0)) {
        throw ParamError("baseline threshold must lie in [0,1]");
    }
}

EdgeMap threshold_map(const ImageGrid& magnitude,
                      const std::optional<double>& t) {
    const ImageGrid norm = normalize_by_max(magnitude);
    if (!t) return adaptive_threshold(norm);
    ImageGrid out(norm.height, norm.width);
    kernels::active().threshold_gt(out.data.data(), norm.data.data(), *t,
                                   out.data.size());
    return out;
}

EdgeMap kernel_operator(const ImageGrid& img, const BaselineParams& params,
                        double side) {
    validate_threshold(params.threshold);
    return threshold_map(kernel_gradient(img, side).modulus, params.threshold);
}

// Four-direction suppression with a tie-break: the comparison toward the
// lower-index neighbor is >= so exactly one pixel of a symmetric two-pixel
// plateau survives (a smoothed step produces such plateaus, and dropping
// both would cut the contour).
ImageGrid canny_nms(const ImageGrid& modulus, const ImageGrid& angle) {
    require_same_size(modulus, angle, "canny_nms");
    ImageGrid out(modulus.height, modulus.width, 0.0);
    constexpr double kPi = 3.14159265358979323846;
    for (int y = 1; y + 1 < modulus.height; ++y) {
        for (int x = 1; x + 1 < modulus.width; ++x) {
            const double m = modulus.at(y, x);
            const double a = angle.at(y, x);
            double prev, next;
            if (a >= kPi / 8.0 && a <= 3.0 * kPi / 8.0) {
                prev = modulus.at(y - 1, x - 1);
                next = modulus.at(y + 1, x + 1);
            } else if (a <= -kPi / 8.0 && a >= -3.0 * kPi / 8.0) {
                prev = modulus.at(y - 1, x + 1);
                next = modulus.at(y + 1, x - 1);
            } else if (a > -kPi / 8.0 && a < kPi / 8.0) {
                prev = modulus.at(y, x - 1);
                next = modulus.at(y, x + 1);
            } else {
                prev = modulus.at(y - 1, x);
                next = modulus.at(y + 1, x);
            }
            if (m >= prev && m > next) out.at(y, x) = m;
        }
    }
    return out;
}

// Separable Gaussian blur, replicate borders.
ImageGrid gaussian_blur(const ImageGrid& g, double sigma) {
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> w(2 * radius + 1);
    double sum = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        w[k + radius] = std::exp(-0.5 * (k * k) / (sigma * sigma));
        sum += w[k + radius];
    }
    for (double& v : w) v /= sum;

    ImageGrid rows(g.height, g.width);
    for (int y = 0; y < g.height; ++y) {
        const double* src = g.row(y);
        double* dst = rows.row(y);
        for (int x = 0; x < g.width; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                const int xx = std::clamp(x + k, 0, g.width - 1);
                acc += w[k + radius] * src[xx];
            }
            dst[x] = acc;
        }
    }
    ImageGrid out(g.height, g.width);
    for (int x = 0; x < g.width; ++x) {
        for (int y = 0; y < g.height; ++y) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                const int yy = std::clamp(y + k, 0, g.height - 1);
                acc += w[k + radius] * rows.at(yy, x);
            }
            out.at(y, x) = acc;
        }
    }
    return out;
}

}  // namespace

EdgeMap sobel(const ImageGrid& img, const BaselineParams& params) {
    return kernel_operator(img, params, 2.0);
}

EdgeMap prewitt(const ImageGrid& img, const BaselineParams& params) {
    return kernel_operator(img, params, 1.0);
}

EdgeMap canny(const ImageGrid& img, const BaselineParams& params) {
    if (img.height < 7 || img.width < 7) {
        throw DimensionError("canny needs at least a 7x7 image");
    }
    if (!(params.canny_sigma > 0.0)) {
        throw ParamError("canny_sigma must be positive");
    }
    if (!(params.canny_low >= 0.0) || !(params.canny_high >= 0.0) ||
        !(params.canny_low < params.canny_high)) {
        throw ParamError("canny thresholds must satisfy 0 <= low < high");
    }

    const ImageGrid smooth = gaussian_blur(img, params.canny_sigma);
    const KernelGradient grad = kernel_gradient(smooth, 2.0);
    const ImageGrid thin = canny_nms(grad.modulus, grad.angle);

    const auto [mn, mx] = grid_min_max(thin);
    (void)mn;
    const double high = params.canny_high * mx;
    const double low = params.canny_low * mx;

    // seed from strong pixels, then flood through weak ones (8-connected)
    EdgeMap out(img.height, img.width, 0.0);
    if (mx <= 0.0) return out;
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            if (thin.at(y, x) > high) {
                out.at(y, x) = 1.0;
                stack.emplace_back(y, x);
            }
        }
    }
    while (!stack.empty()) {
        const auto [y, x] = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const int yy = y + dy;
                const int xx = x + dx;
                if (yy < 0 || yy >= img.height || xx < 0 || xx >= img.width) {
                    continue;
                }
                if (out.at(yy, xx) == 0.0 && thin.at(yy, xx) > low) {
                    out.at(yy, xx) = 1.0;
                    stack.emplace_back(yy, xx);
                }
            }
        }
    }
    return out;
}

EdgeMap wtmm(const ImageGrid& img, const BaselineParams& params) {
    validate_threshold(params.threshold);
    const FilterBank bank = bank_by_name(params.wtmm_bank);
    const WaveletDecomposition dec = dwt2(img, bank);
    const auto [mod, ang] = modulus_highfreq(dec.cH, dec.cV, dec.cD);
    const EdgeMap thin = threshold_map(nms(mod, ang), params.threshold);

    EdgeMap out(img.height, img.width);
    for (int y = 0; y < img.height; ++y) {
        const int sy = std::min(y / 2, thin.height - 1);
        for (int x = 0; x < img.width; ++x) {
            const int sx = std::min(x / 2, thin.width - 1);
            out.at(y, x) = thin.at(sy, sx);
        }
    }
    return out;
}

EdgeMap run_baseline(const std::string& name, const ImageGrid& img,
                     const BaselineParams& params) {
    if (name == "sobel") return sobel(img, params);
    if (name == "prewitt") return prewitt(img, params);
    if (name == "canny") return canny(img, params);
    if (name == "wtmm") return wtmm(img, params);
    throw LookupError("unknown baseline operator '" + name + "'");
}

}  // namespace edbsw
