#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "edbsw/baselines.hpp"
#include "edbsw/errors.hpp"
#include "edbsw/grid.hpp"
#include "edbsw/metrics.hpp"
#include "edbsw/pipeline.hpp"

using namespace edbsw;

namespace {

ImageGrid random_grid(int h, int w, double lo, double hi, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    ImageGrid g(h, w);
    for (auto& v : g.data) v = dist(rng);
    return g;
}

ImageGrid square_image(int n, int lo, int hi) {
    ImageGrid g(n, n, 0.0);
    for (int y = lo; y < hi; ++y) {
        for (int x = lo; x < hi; ++x) g.at(y, x) = 1.0;
    }
    return g;
}

ImageGrid gt_ring(int n, int lo, int hi) {
    ImageGrid g(n, n, 0.0);
    for (int y = lo; y < hi; ++y) {
        for (int x = lo; x < hi; ++x) {
            if (y == lo || y == hi - 1 || x == lo || x == hi - 1) {
                g.at(y, x) = 1.0;
            }
        }
    }
    return g;
}

ImageGrid add_gaussian_noise(const ImageGrid& g, double sigma, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(1e-12, 1.0);
    ImageGrid out = g;
    for (auto& v : out.data) {
        const double u1 = u(rng);
        const double u2 = u(rng);
        const double z = std::sqrt(-2.0 * std::log(u1)) *
                         std::cos(6.283185307179586 * u2);
        v = std::clamp(v + sigma * z, 0.0, 1.0);
    }
    return out;
}

// chebyshev distance from every pixel to the nearest ring pixel
std::vector<int> ring_distances(const ImageGrid& ring) {
    std::vector<std::pair<int, int>> pts;
    for (int y = 0; y < ring.height; ++y) {
        for (int x = 0; x < ring.width; ++x) {
            if (ring.at(y, x) > 0.0) pts.emplace_back(y, x);
        }
    }
    std::vector<int> d(ring.data.size(), 0);
    for (int y = 0; y < ring.height; ++y) {
        for (int x = 0; x < ring.width; ++x) {
            int best = 1 << 20;
            for (const auto& [py, px] : pts) {
                best = std::min(best,
                                std::max(std::abs(y - py), std::abs(x - px)));
            }
            d[static_cast<std::size_t>(y) * ring.width + x] = best;
        }
    }
    return d;
}

// 3x3 correlation magnitude straight from the kernel matrices
ImageGrid oracle_kernel_magnitude(const ImageGrid& g, double side) {
    const double kx[3][3] = {{-1, 0, 1}, {-side, 0, side}, {-1, 0, 1}};
    const double ky[3][3] = {{-1, -side, -1}, {0, 0, 0}, {1, side, 1}};
    ImageGrid out(g.height, g.width, 0.0);
    for (int y = 1; y + 1 < g.height; ++y) {
        for (int x = 1; x + 1 < g.width; ++x) {
            double gx = 0.0;
            double gy = 0.0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    gx += kx[dy + 1][dx + 1] * g.at(y + dy, x + dx);
                    gy += ky[dy + 1][dx + 1] * g.at(y + dy, x + dx);
                }
            }
            out.at(y, x) = std::sqrt(gx * gx + gy * gy);
        }
    }
    return out;
}

double max_abs_diff(const ImageGrid& a, const ImageGrid& b) {
    REQUIRE(a.same_size(b));
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        worst = std::max(worst, std::abs(a.data[i] - b.data[i]));
    }
    return worst;
}

}  // namespace

TEST_CASE("all baselines are silent on constants and respect the range") {
    const ImageGrid flat(16, 16, 0.4);
    for (const char* name : {"sobel", "prewitt", "canny", "wtmm"}) {
        const EdgeMap e = run_baseline(name, flat);
        CHECK(e.height == 16);
        CHECK(e.width == 16);
        for (double v : e.data) CHECK(v == 0.0);
    }
    const ImageGrid noisy = random_grid(20, 17, 0.0, 1.0, 11);
    for (const char* name : {"sobel", "prewitt", "canny", "wtmm"}) {
        const EdgeMap e = run_baseline(name, noisy);
        CHECK(e.height == noisy.height);
        CHECK(e.width == noisy.width);
        for (double v : e.data) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
    CHECK_THROWS_AS(run_baseline("roberts", flat), LookupError);
}

TEST_CASE("kernel operators match the explicit kernel matrices") {
    const ImageGrid g = random_grid(14, 19, 0.0, 1.0, 99);
    BaselineParams keep_all;
    keep_all.threshold = 0.0;

    SECTION("sobel equals its normalized kernel-magnitude oracle") {
        const EdgeMap got = sobel(g, keep_all);
        const ImageGrid want = normalize_by_max(oracle_kernel_magnitude(g, 2.0));
        CHECK(max_abs_diff(got, want) < 1e-12);
    }

    SECTION("prewitt equals its normalized kernel-magnitude oracle") {
        const EdgeMap got = prewitt(g, keep_all);
        const ImageGrid want = normalize_by_max(oracle_kernel_magnitude(g, 1.0));
        CHECK(max_abs_diff(got, want) < 1e-12);
    }

    SECTION("the two operators differ exactly by the center-row weighting") {
        // on an image where only the center row varies horizontally, the
        // corner taps cancel and the responses scale 2:1
        ImageGrid strip(5, 9, 0.0);
        for (int x = 0; x < 9; ++x) strip.at(2, x) = 0.1 * x;
        const ImageGrid ms = oracle_kernel_magnitude(strip, 2.0);
        const ImageGrid mp = oracle_kernel_magnitude(strip, 1.0);
        for (int x = 1; x < 8; ++x) {
            CHECK(ms.at(2, x) == Catch::Approx(2.0 * mp.at(2, x)).margin(1e-12));
        }
    }
}

TEST_CASE("gradient operators on a vertical step") {
    ImageGrid g(16, 16, 0.0);
    for (int y = 0; y < 16; ++y) {
        for (int x = 8; x < 16; ++x) g.at(y, x) = 1.0;
    }
    for (const char* name : {"sobel", "prewitt"}) {
        const EdgeMap e = run_baseline(name, g);
        for (int y = 0; y < 16; ++y) {
            for (int x = 0; x < 16; ++x) {
                const bool border = y == 0 || y == 15;
                if (!border && (x == 7 || x == 8)) {
                    CHECK(e.at(y, x) == 1.0);  // both step columns peak
                } else {
                    CHECK(e.at(y, x) == 0.0);
                }
            }
        }
    }
}

TEST_CASE("sobel and prewitt are translation-equivariant away from borders") {
    const ImageGrid block = random_grid(16, 16, 0.0, 1.0, 123);
    ImageGrid a(24, 24, 0.3);
    ImageGrid b(24, 24, 0.3);
    for (int y = 0; y < 16; ++y) {
        for (int x = 0; x < 16; ++x) {
            a.at(2 + y, 2 + x) = block.at(y, x);
            b.at(5 + y, 4 + x) = block.at(y, x);
        }
    }
    BaselineParams keep_all;
    keep_all.threshold = 0.0;
    for (const char* name : {"sobel", "prewitt"}) {
        const EdgeMap ea = run_baseline(name, a, keep_all);
        const EdgeMap eb = run_baseline(name, b, keep_all);
        for (int y = 0; y < 16; ++y) {
            for (int x = 0; x < 16; ++x) {
                CHECK(ea.at(2 + y, 2 + x) == eb.at(5 + y, 4 + x));
            }
        }
    }
}

TEST_CASE("baseline parameter validation") {
    const ImageGrid g(16, 16, 0.5);
    BaselineParams p;
    p.threshold = -0.1;
    CHECK_THROWS_AS(sobel(g, p), ParamError);
    p.threshold = 1.5;
    CHECK_THROWS_AS(prewitt(g, p), ParamError);

    BaselineParams c;
    c.canny_sigma = 0.0;
    CHECK_THROWS_AS(canny(g, c), ParamError);
    c = BaselineParams{};
    c.canny_low = 0.3;
    c.canny_high = 0.2;
    CHECK_THROWS_AS(canny(g, c), ParamError);
    c.canny_low = -0.1;
    c.canny_high = 0.2;
    CHECK_THROWS_AS(canny(g, c), ParamError);

    CHECK_THROWS_AS(sobel(ImageGrid(2, 2, 0.0)), DimensionError);
    CHECK_THROWS_AS(canny(ImageGrid(6, 6, 0.0)), DimensionError);
}

TEST_CASE("canny traces a closed single-pixel contour around a clean square") {
    const int n = 128;
    const ImageGrid img = square_image(n, 32, 96);
    const EdgeMap e = canny(img);

    int on = 0;
    for (double v : e.data) {
        CHECK((v == 0.0 || v == 1.0));
        if (v > 0.0) ++on;
    }
    // the ring of the square holds 4*63 = 252 pixels
    CHECK(on >= 240);
    CHECK(on <= 264);

    // single 8-connected component...
    std::vector<int> comp(e.data.size(), -1);
    int ncomp = 0;
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            if (e.at(y, x) <= 0.0 || comp[static_cast<std::size_t>(y) * n + x] >= 0) {
                continue;
            }
            std::vector<std::pair<int, int>> stack{{y, x}};
            comp[static_cast<std::size_t>(y) * n + x] = ncomp;
            while (!stack.empty()) {
                const auto [cy, cx] = stack.back();
                stack.pop_back();
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int yy = cy + dy;
                        const int xx = cx + dx;
                        if (yy < 0 || yy >= n || xx < 0 || xx >= n) continue;
                        if (e.at(yy, xx) > 0.0 &&
                            comp[static_cast<std::size_t>(yy) * n + xx] < 0) {
                            comp[static_cast<std::size_t>(yy) * n + xx] = ncomp;
                            stack.emplace_back(yy, xx);
                        }
                    }
                }
            }
            ++ncomp;
        }
    }
    CHECK(ncomp == 1);

    // ...with no loose ends: every contour pixel continues in two directions
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            if (e.at(y, x) <= 0.0) continue;
            int degree = 0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dy == 0 && dx == 0) continue;
                    const int yy = y + dy;
                    const int xx = x + dx;
                    if (yy >= 0 && yy < n && xx >= 0 && xx < n &&
                        e.at(yy, xx) > 0.0) {
                        ++degree;
                    }
                }
            }
            CHECK(degree >= 2);
        }
    }
}

TEST_CASE("raising the canny high threshold only removes pixels") {
    const ImageGrid img = square_image(64, 16, 48);
    BaselineParams lo_p;
    const EdgeMap base = canny(img, lo_p);
    for (double high : {0.3, 0.5, 0.8}) {
        BaselineParams p;
        p.canny_high = high;
        const EdgeMap raised = canny(img, p);
        for (std::size_t i = 0; i < base.data.size(); ++i) {
            if (raised.data[i] > 0.0) CHECK(base.data[i] > 0.0);
        }
    }
}

TEST_CASE("wtmm behavior") {
    SECTION("odd input dimensions survive the round trip") {
        const ImageGrid g = random_grid(17, 23, 0.0, 1.0, 500);
        const EdgeMap e = wtmm(g);
        CHECK(e.height == 17);
        CHECK(e.width == 23);
        // nearest-neighbor upsampling copies subband pixels into 2x2 blocks
        for (int y = 0; y + 1 < 16; y += 2) {
            for (int x = 0; x + 1 < 22; x += 2) {
                CHECK(e.at(y, x) == e.at(y, x + 1));
                CHECK(e.at(y, x) == e.at(y + 1, x));
            }
        }
    }

    SECTION("different banks give different maps") {
        const ImageGrid g = add_gaussian_noise(square_image(64, 16, 48), 0.1, 7);
        const EdgeMap haar_map = wtmm(g);
        BaselineParams p;
        p.wtmm_bank = "bcssw";
        const EdgeMap bcssw_map = wtmm(g, p);
        CHECK(max_abs_diff(haar_map, bcssw_map) > 0.5);
    }

    SECTION("wtmm leaves more spurious pixels than the full flow") {
        const int n = 128;
        const ImageGrid clean = square_image(n, 32, 96);
        const ImageGrid noisy = add_gaussian_noise(clean, 0.1, 777);
        const std::vector<int> dist = ring_distances(gt_ring(n, 32, 96));

        const EdgeMap wt = wtmm(noisy);
        const EdgeMap full = edbsw_detect(noisy).first;
        // binarize at 0.1 so the real-valued map's faint floor is not counted
        const auto spurious = [&](const EdgeMap& e) {
            int c = 0;
            for (int y = 0; y < n; ++y) {
                for (int x = 0; x < n; ++x) {
                    if (e.at(y, x) > 0.1 &&
                        dist[static_cast<std::size_t>(y) * n + x] > 5) {
                        ++c;
                    }
                }
            }
            return c;
        };
        const int wt_spurious = spurious(wt);
        const int full_spurious = spurious(full);
        CHECK(wt_spurious >= full_spurious);
        CHECK(wt_spurious > 0);
    }
}
