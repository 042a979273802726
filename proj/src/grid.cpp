#include "edbsw/grid.hpp"

#include <cmath>

#include "edbsw/errors.hpp"
#include "edbsw/simd.hpp"

namespace edbsw {

void require_same_size(const ImageGrid& a, const ImageGrid& b, const char* where) {
    if (!a.same_size(b))
        throw DimensionError(std::string(where) + ": size mismatch " + std::to_string(a.height) +
                             "x" + std::to_string(a.width) + " vs " + std::to_string(b.height) +
                             "x" + std::to_string(b.width));
}

std::pair<double, double> grid_min_max(const ImageGrid& g) {
    if (g.size() == 0) return {0.0, 0.0};
    double mn = 0.0, mx = 0.0;
    kernels::active().minmax(g.data.data(), g.size(), &mn, &mx);
    return {mn, mx};
}

ImageGrid normalize_by_max(const ImageGrid& g) {
    auto [mn, mx] = grid_min_max(g);
    ImageGrid out = g;
    if (mx <= 0.0) return out;  // nothing to scale against; leave untouched
    kernels::active().shift_scale(out.data.data(), g.data.data(), 0.0, 1.0 / mx, g.size());
    return out;
}

ImageGrid normalize_min_max(const ImageGrid& g) {
    auto [mn, mx] = grid_min_max(g);
    ImageGrid out(g.height, g.width, 0.0);
    if (mx - mn <= 0.0) return out;  // constant input maps to all zeros
    kernels::active().shift_scale(out.data.data(), g.data.data(), -mn, 1.0 / (mx - mn), g.size());
    return out;
}

bool all_finite(const ImageGrid& g) {
    for (double v : g.data)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace edbsw
