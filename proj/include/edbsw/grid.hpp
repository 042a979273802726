#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace edbsw {

// Row-major 2D grid of doubles. Intensity images live in [0,1] by convention;
// subbands, moduli and working-scale morphology grids may exceed that range.
struct ImageGrid {
    int height = 0;
    int width = 0;
    std::vector<double> data;

    ImageGrid() = default;
    ImageGrid(int h, int w, double fill = 0.0)
        : height(h), width(w), data(static_cast<std::size_t>(h) * static_cast<std::size_t>(w), fill) {}

    double& at(int y, int x) { return data[static_cast<std::size_t>(y) * width + x]; }
    double at(int y, int x) const { return data[static_cast<std::size_t>(y) * width + x]; }

    double* row(int y) { return data.data() + static_cast<std::size_t>(y) * width; }
    const double* row(int y) const { return data.data() + static_cast<std::size_t>(y) * width; }

    std::size_t size() const { return data.size(); }
    bool same_size(const ImageGrid& o) const { return height == o.height && width == o.width; }
};

// Smallest and largest value in the grid. Empty grids yield (0, 0).
std::pair<double, double> grid_min_max(const ImageGrid& g);

// g / max(g) when the max is positive; an all-zero (or non-positive-max) grid
// is returned unchanged so zero stays zero.
ImageGrid normalize_by_max(const ImageGrid& g);

// (g - min(g)) / (max(g) - min(g)) with the same zero-guard: a constant grid
// maps to all zeros.
ImageGrid normalize_min_max(const ImageGrid& g);

// Throws DimensionError unless both grids have identical dimensions.
void require_same_size(const ImageGrid& a, const ImageGrid& b, const char* where);

// True when every value is finite.
bool all_finite(const ImageGrid& g);

}  // namespace edbsw
