#include "edbsw/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "edbsw/errors.hpp"
#include "edbsw/simd.hpp"

namespace edbsw {

namespace {

// (h+1)x(w+1) summed-area table; S(y, x) = sum of g over [0,y) x [0,x).
std::vector<double> integral_table(const ImageGrid& a, const ImageGrid& b,
                                   bool product_with_b) {
    const int h = a.height;
    const int w = a.width;
    std::vector<double> s(static_cast<std::size_t>(h + 1) * (w + 1), 0.0);
    for (int y = 0; y < h; ++y) {
        double row_acc = 0.0;
        for (int x = 0; x < w; ++x) {
            const double v =
                product_with_b ? a.at(y, x) * b.at(y, x) : a.at(y, x);
            row_acc += v;
            s[static_cast<std::size_t>(y + 1) * (w + 1) + (x + 1)] =
                s[static_cast<std::size_t>(y) * (w + 1) + (x + 1)] + row_acc;
        }
    }
    return s;
}

double window_sum(const std::vector<double>& s, int w, int y0, int x0,
                  int side) {
    const auto at = [&](int y, int x) {
        return s[static_cast<std::size_t>(y) * (w + 1) + x];
    };
    return at(y0 + side, x0 + side) - at(y0, x0 + side) - at(y0 + side, x0) +
           at(y0, x0);
}

}  // namespace

double mse(const ImageGrid& a, const ImageGrid& b) {
    require_same_size(a, b, "mse");
    if (a.data.empty()) return 0.0;
    const double ss = kernels::active().sum_sq_diff(a.data.data(),
                                                    b.data.data(),
                                                    a.data.size());
    return ss / static_cast<double>(a.data.size());
}

double psnr(const ImageGrid& a, const ImageGrid& b) {
    const double err = mse(a, b);
    if (err == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / err);
}

double ssim(const ImageGrid& a, const ImageGrid& b) {
    require_same_size(a, b, "ssim");
    constexpr int kSide = 8;
    if (a.height < kSide || a.width < kSide) {
        throw DimensionError("ssim needs at least an 8x8 image");
    }
    constexpr double kC1 = 0.01 * 0.01;
    constexpr double kC2 = 0.03 * 0.03;
    const int w = a.width;
    const std::vector<double> sa = integral_table(a, a, false);
    const std::vector<double> sb = integral_table(b, b, false);
    const std::vector<double> saa = integral_table(a, a, true);
    const std::vector<double> sbb = integral_table(b, b, true);
    const std::vector<double> sab = integral_table(a, b, true);

    const double n = static_cast<double>(kSide) * kSide;
    double total = 0.0;
    long long count = 0;
    for (int y0 = 0; y0 + kSide <= a.height; ++y0) {
        for (int x0 = 0; x0 + kSide <= a.width; ++x0) {
            const double mu_a = window_sum(sa, w, y0, x0, kSide) / n;
            const double mu_b = window_sum(sb, w, y0, x0, kSide) / n;
            const double var_a =
                window_sum(saa, w, y0, x0, kSide) / n - mu_a * mu_a;
            const double var_b =
                window_sum(sbb, w, y0, x0, kSide) / n - mu_b * mu_b;
            const double cov =
                window_sum(sab, w, y0, x0, kSide) / n - mu_a * mu_b;
            const double num =
                (2.0 * mu_a * mu_b + kC1) * (2.0 * cov + kC2);
            const double den = (mu_a * mu_a + mu_b * mu_b + kC1) *
                               (var_a + var_b + kC2);
            total += num / den;
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

double entropy(const ImageGrid& edge) {
    if (edge.data.empty()) return 0.0;
    std::size_t on = 0;
    for (double v : edge.data) {
        if (v > 0.0) ++on;
    }
    const double p = static_cast<double>(on) / static_cast<double>(edge.data.size());
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double entropy_hist256(const ImageGrid& edge) {
    if (edge.data.empty()) return 0.0;
    std::vector<long long> bins(256, 0);
    for (double v : edge.data) {
        const int b = std::clamp(static_cast<int>(v * 256.0), 0, 255);
        ++bins[static_cast<std::size_t>(b)];
    }
    const double total = static_cast<double>(edge.data.size());
    double h = 0.0;
    for (long long c : bins) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / total;
        h -= p * std::log2(p);
    }
    return h / 8.0;
}

MetricsReport evaluate_pair(const ImageGrid& reference,
                            const ImageGrid& candidate) {
    MetricsReport r;
    r.mse = mse(reference, candidate);
    r.psnr_db = psnr(reference, candidate);
    r.ssim = ssim(reference, candidate);
    r.entropy = entropy(candidate);
    return r;
}

}  // namespace edbsw
