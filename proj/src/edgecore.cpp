#include "edbsw/edgecore.hpp"

#include <cmath>
#include <numbers>

#include "edbsw/errors.hpp"
#include "edbsw/simd.hpp"

namespace edbsw {
namespace {

constexpr double kPi = std::numbers::pi;

double angle_of(double gx, double gy) {
    if (gx == 0.0) return gy != 0.0 ? kPi / 2.0 : 0.0;
    return std::atan(gy / gx);
}

// derivative along the row direction: central inside, one-sided at borders
void derivative_1d(const double* x, int N, int stride, double* out,
                   int out_stride) {
    out[0] = x[stride] - x[0];
    for (int i = 1; i < N - 1; ++i)
        out[i * out_stride] = 0.5 * (x[(i + 1) * stride] - x[(i - 1) * stride]);
    out[(N - 1) * out_stride] = x[(N - 1) * stride] - x[(N - 2) * stride];
}

struct WindowView {
    int y0, x0, h, w;
};

ImageGrid extract(const ImageGrid& g, const WindowView& v, bool absolute) {
    ImageGrid out(v.h, v.w);
    for (int y = 0; y < v.h; ++y)
        for (int x = 0; x < v.w; ++x) {
            const double val = g.at(v.y0 + y, v.x0 + x);
            out.at(y, x) = absolute ? std::abs(val) : val;
        }
    return out;
}

void mean_std(const ImageGrid& g, double* mean, double* std_dev) {
    double acc = 0.0;
    for (double v : g.data) acc += v;
    const double mu = acc / static_cast<double>(g.size());
    acc = 0.0;
    for (double v : g.data) acc += (v - mu) * (v - mu);
    *mean = mu;
    // population deviation: the selector's pseudocode carries no correction
    *std_dev = std::sqrt(acc / static_cast<double>(g.size()));
}

void validate_params(const SelectorParams& p) {
    if (p.T < 0.0) throw ParamError("selector: deviation tolerance must be >= 0");
    if (p.window_h < 3 || p.window_w < 3 || p.window_h % 2 == 0 ||
        p.window_w % 2 == 0)
        throw ParamError("selector: window dimensions must be odd and >= 3");
    if (p.stride_y < 0 || p.stride_x < 0)
        throw ParamError("selector: stride must not be negative");
    if (p.mean_lo >= p.mean_hi)
        throw ParamError("selector: empty mean gate");
}

}  // namespace

GradientField gradient(const ImageGrid& img) {
    if (img.height < 3 || img.width < 3)
        throw DimensionError("gradient: image must be at least 3x3");
    const int H = img.height, W = img.width;
    GradientField f{ImageGrid(H, W), ImageGrid(H, W), ImageGrid(H, W),
                    ImageGrid(H, W)};
    for (int y = 0; y < H; ++y)
        derivative_1d(img.row(y), W, 1, f.Cx.row(y), 1);
    for (int x = 0; x < W; ++x)
        derivative_1d(img.row(0) + x, H, W, f.Cy.row(0) + x, W);
    kernels::active().mag2(f.modulus.data.data(), f.Cx.data.data(),
                           f.Cy.data.data(), f.modulus.size());
    for (std::size_t i = 0; i < f.angle.size(); ++i)
        f.angle.data[i] = angle_of(f.Cx.data[i], f.Cy.data[i]);
    return f;
}

std::pair<ImageGrid, ImageGrid> modulus_highfreq(const ImageGrid& cH,
                                                 const ImageGrid& cV,
                                                 const ImageGrid& cD) {
    require_same_size(cH, cV, "modulus_highfreq");
    require_same_size(cH, cD, "modulus_highfreq");
    ImageGrid modulus(cH.height, cH.width), angle(cH.height, cH.width);
    kernels::active().mag3(modulus.data.data(), cH.data.data(), cV.data.data(),
                           cD.data.data(), modulus.size());
    for (std::size_t i = 0; i < angle.size(); ++i)
        angle.data[i] = angle_of(cV.data[i], cH.data[i]);
    return {std::move(modulus), std::move(angle)};
}

ImageGrid nms(const ImageGrid& modulus, const ImageGrid& angle) {
    require_same_size(modulus, angle, "nms");
    const int H = modulus.height, W = modulus.width;
    ImageGrid out(H, W);
    for (int y = 1; y < H - 1; ++y)
        for (int x = 1; x < W - 1; ++x) {
            const double th = angle.at(y, x);
            double n1, n2;
            if (th >= kPi / 8.0 && th <= 3.0 * kPi / 8.0) {
                n1 = modulus.at(y - 1, x - 1);  // pi/4 class
                n2 = modulus.at(y + 1, x + 1);
            } else if (th <= -kPi / 8.0 && th >= -3.0 * kPi / 8.0) {
                n1 = modulus.at(y - 1, x + 1);  // 3pi/4 class
                n2 = modulus.at(y + 1, x - 1);
            } else if (th > -kPi / 8.0 && th < kPi / 8.0) {
                n1 = modulus.at(y, x - 1);  // gradient along x
                n2 = modulus.at(y, x + 1);
            } else {
                n1 = modulus.at(y - 1, x);  // gradient along y
                n2 = modulus.at(y + 1, x);
            }
            const double m = modulus.at(y, x);
            out.at(y, x) = (m > n1 && m > n2) ? m : 0.0;
        }
    return out;
}

ImageGrid adaptive_threshold(const ImageGrid& modulus) {
    const auto [mn, mx] = grid_min_max(modulus);
    const double t = 0.5 * (mx + mn);
    ImageGrid out(modulus.height, modulus.width);
    kernels::active().threshold_gt(out.data.data(), modulus.data.data(), t,
                                   modulus.size());
    return out;
}

SelectedDetails uncertainty_select(const WaveletDecomposition& dec,
                                   const SelectorParams& params,
                                   std::vector<WindowStat>* stats) {
    validate_params(params);
    require_same_size(dec.cA, dec.cH, "uncertainty_select");
    require_same_size(dec.cA, dec.cV, "uncertainty_select");
    require_same_size(dec.cA, dec.cD, "uncertainty_select");
    const int H = dec.cA.height, W = dec.cA.width;
    const int wh = params.window_h, ww = params.window_w;
    if (wh > H || ww > W)
        throw DimensionError("uncertainty_select: window larger than subband");
    const int sy = params.resolved_stride_y(), sx = params.resolved_stride_x();

    SelectedDetails out{ImageGrid(H, W), ImageGrid(H, W), ImageGrid(H, W)};
    if (stats) stats->clear();

    for (int y0 = 0; y0 + wh <= H; y0 += sy) {
        for (int x0 = 0; x0 + ww <= W; x0 += sx) {
            const WindowView win{y0, x0, wh, ww};
            WindowStat st;
            st.y0 = y0;
            st.x0 = x0;

            const ImageGrid wa = extract(dec.cA, win, false);
            mean_std(wa, &st.mu_D, &st.delta_D);
            double mu_ignored;
            mean_std(extract(dec.cH, win, true), &mu_ignored, &st.delta_h);
            mean_std(extract(dec.cV, win, true), &mu_ignored, &st.delta_v);
            mean_std(extract(dec.cD, win, true), &mu_ignored, &st.delta_d);

            // mu_E: mean of the combined detail modulus; diagnostic only
            double acc = 0.0;
            for (int y = 0; y < wh; ++y)
                for (int x = 0; x < ww; ++x) {
                    const double h = dec.cH.at(y0 + y, x0 + x);
                    const double v = dec.cV.at(y0 + y, x0 + x);
                    const double d = dec.cD.at(y0 + y, x0 + x);
                    acc += std::sqrt((h * h + v * v) + d * d);
                }
            st.mu_E = acc / static_cast<double>(wh * ww);

            // (i) normality proxy: >= 90% of the cA window within mu +- 2 sigma
            int inside = 0;
            for (double v : wa.data)
                if (std::abs(v - st.mu_D) <= 2.0 * st.delta_D) ++inside;
            const bool normal =
                10 * inside >= 9 * static_cast<int>(wa.size());
            // (ii) mean gate
            const bool mean_ok =
                st.mu_D > params.mean_lo && st.mu_D < params.mean_hi;
            // (iii) each component deviation inside (mu_D, mu_D + T)
            // (iv) the cA deviation tracks each component within T
            bool bands_ok = true;
            for (double dv : {st.delta_h, st.delta_v, st.delta_d}) {
                if (!(dv > st.mu_D && dv < st.mu_D + params.T)) bands_ok = false;
                if (!(st.delta_D - dv < params.T)) bands_ok = false;
            }

            st.selected = normal && mean_ok && bands_ok;
            if (stats) stats->push_back(st);
            if (!st.selected) continue;

            const ImageGrid* src[3] = {&dec.cH, &dec.cV, &dec.cD};
            ImageGrid* dst[3] = {&out.CH, &out.CV, &out.CD};
            for (int c = 0; c < 3; ++c) {
                GradientField gf = gradient(extract(*src[c], win, false));
                ImageGrid local = nms(gf.modulus, gf.angle);
                for (int y = 0; y < wh; ++y)
                    for (int x = 0; x < ww; ++x) {
                        double& cell = dst[c]->at(y0 + y, x0 + x);
                        cell = std::max(cell, local.at(y, x));
                    }
            }
        }
    }
    return out;
}

}  // namespace edbsw
