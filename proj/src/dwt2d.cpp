#include "edbsw/dwt2d.hpp"

#include <algorithm>

#include "edbsw/errors.hpp"

namespace edbsw {
namespace {

enum class Extension { periodic, whole_sample };

// Odd-length lowpass filters symmetric about index 0 keep their symmetry
// through the transform, and whole-sample reflection is then
// reconstruction-exact.  Anything else (minimum-phase orthogonal families,
// even-length spline pairs) round-trips exactly only under periodic
// extension, so the bank picks its own boundary rule.
bool ws_symmetric(const FilterSeq& f) {
    const int len = f.length();
    if (len % 2 == 0 || f.first != -(len - 1) / 2) return false;
    for (int i = 0; i < len / 2; ++i)
        if (f.coeffs[i] != f.coeffs[len - 1 - i]) return false;
    return true;
}

Extension extension_for(const FilterBank& bank) {
    return (ws_symmetric(bank.analysis_low) && ws_symmetric(bank.synthesis_low))
               ? Extension::whole_sample
               : Extension::periodic;
}

int fold_periodic(int n, int N) {
    int m = n % N;
    return m < 0 ? m + N : m;
}

// reflect about 0 and N-1 (whole-sample both ends, period 2N-2)
int fold_ws(int n, int N) {
    if (N == 1) return 0;
    const int P = 2 * N - 2;
    int m = n % P;
    if (m < 0) m += P;
    return m < N ? m : P - m;
}

// Extending the *subbands* of a whole-sample-extended signal: the low band
// inherits whole-sample symmetry about 0 and half-sample about K-1/2, the
// high band half-sample about -1/2 and whole-sample about K-1 (the high
// filter is centred on index 1, which shifts the symmetry onto the odd
// lattice).  Both have period 2K-1.
int fold_sub_low(int k, int K) {
    if (K == 1) return 0;
    const int P = 2 * K - 1;
    int m = k % P;
    if (m < 0) m += P;
    return m < K ? m : P - m;
}

int fold_sub_high(int k, int K) {
    if (K == 1) return 0;
    const int P = 2 * K - 1;
    int m = k % P;
    if (m < 0) m += P;
    return m < K ? m : P - 1 - m;
}

int floor_div2(int a) { return a >= 0 ? a / 2 : -((-a + 1) / 2); }
int ceil_div2(int a) { return floor_div2(a + 1); }

// a_k = 1/2 * sum_n x_n f_{n-2k} for k = 0 .. N/2-1, x extended per `ext`
void analyze_1d(const double* x, int N, int stride, Extension ext,
                const FilterSeq& low, const FilterSeq& high, double* out_low,
                double* out_high, int out_stride) {
    const int K = N / 2;
    for (int k = 0; k < K; ++k) {
        double acc = 0.0;
        for (int j = 0; j < low.length(); ++j) {
            const int n = 2 * k + low.first + j;
            const int m =
                ext == Extension::periodic ? fold_periodic(n, N) : fold_ws(n, N);
            acc += x[m * stride] * low.coeffs[j];
        }
        out_low[k * out_stride] = 0.5 * acc;
        acc = 0.0;
        for (int j = 0; j < high.length(); ++j) {
            const int n = 2 * k + high.first + j;
            const int m =
                ext == Extension::periodic ? fold_periodic(n, N) : fold_ws(n, N);
            acc += x[m * stride] * high.coeffs[j];
        }
        out_high[k * out_stride] = 0.5 * acc;
    }
}

// z_n = sum_k a_k h_{n-2k} + sum_k d_k g_{n-2k} for n = 0 .. N-1
void synthesize_1d(const double* a, const double* d, int K, int in_stride,
                   Extension ext, const FilterSeq& low, const FilterSeq& high,
                   double* out, int N, int out_stride) {
    for (int n = 0; n < N; ++n) {
        double acc = 0.0;
        int kmin = ceil_div2(n - low.last());
        int kmax = floor_div2(n - low.first);
        for (int k = kmin; k <= kmax; ++k) {
            const int m =
                ext == Extension::periodic ? fold_periodic(k, K) : fold_sub_low(k, K);
            acc += a[m * in_stride] * low.coeffs[n - 2 * k - low.first];
        }
        kmin = ceil_div2(n - high.last());
        kmax = floor_div2(n - high.first);
        for (int k = kmin; k <= kmax; ++k) {
            const int m = ext == Extension::periodic ? fold_periodic(k, K)
                                                     : fold_sub_high(k, K);
            acc += d[m * in_stride] * high.coeffs[n - 2 * k - high.first];
        }
        out[n * out_stride] = acc;
    }
}

// one symmetric row/column of padding so both axes are even
ImageGrid pad_even(const ImageGrid& img) {
    const int H = img.height + img.height % 2;
    const int W = img.width + img.width % 2;
    if (H == img.height && W == img.width) return img;
    ImageGrid out(H, W);
    for (int y = 0; y < H; ++y) {
        const int sy = y < img.height ? y : img.height - 2;
        for (int x = 0; x < W; ++x) {
            const int sx = x < img.width ? x : img.width - 2;
            out.at(y, x) = img.at(sy, sx);
        }
    }
    return out;
}

}  // namespace

ImageGrid upsample2(const ImageGrid& img) {
    const int H = img.height, W = img.width;
    // rows first: every source row widens to 2W
    ImageGrid wide(H, 2 * W);
    for (int y = 0; y < H; ++y) {
        const double* src = img.row(y);
        double* dst = wide.row(y);
        for (int x = 0; x < W; ++x) {
            dst[2 * x] = src[x];
            dst[2 * x + 1] =
                x + 1 < W ? 0.5 * (src[x] + src[x + 1]) : src[x];
        }
    }
    ImageGrid out(2 * H, 2 * W);
    for (int y = 0; y < H; ++y) {
        const double* src = wide.row(y);
        const double* nxt = y + 1 < H ? wide.row(y + 1) : src;
        double* even = out.row(2 * y);
        double* odd = out.row(2 * y + 1);
        for (int x = 0; x < 2 * W; ++x) {
            even[x] = src[x];
            odd[x] = y + 1 < H ? 0.5 * (src[x] + nxt[x]) : src[x];
        }
    }
    return out;
}

ImageGrid downsample2(const ImageGrid& img) {
    if (img.height < 2 || img.width < 2)
        throw DimensionError("downsample2: need at least 2 pixels per axis");
    const int H = (img.height + 1) / 2, W = (img.width + 1) / 2;
    ImageGrid out(H, W);
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) out.at(y, x) = img.at(2 * y, 2 * x);
    return out;
}

WaveletDecomposition dwt2(const ImageGrid& img, const FilterBank& bank) {
    const int flen =
        std::max(bank.analysis_low.length(), bank.analysis_high.length());
    if (img.height < flen || img.width < flen)
        throw DimensionError("dwt2: image smaller than the analysis filters");

    const Extension ext = extension_for(bank);
    const ImageGrid p = pad_even(img);
    const int H = p.height, W = p.width, Kh = H / 2, Kw = W / 2;

    ImageGrid rowL(H, Kw), rowH(H, Kw);
    for (int y = 0; y < H; ++y)
        analyze_1d(p.row(y), W, 1, ext, bank.analysis_low, bank.analysis_high,
                   rowL.row(y), rowH.row(y), 1);

    WaveletDecomposition dec{ImageGrid(Kh, Kw), ImageGrid(Kh, Kw),
                             ImageGrid(Kh, Kw), ImageGrid(Kh, Kw), img.height,
                             img.width};
    for (int x = 0; x < Kw; ++x) {
        analyze_1d(&rowL.at(0, x), H, Kw, ext, bank.analysis_low,
                   bank.analysis_high, &dec.cA.at(0, x), &dec.cH.at(0, x), Kw);
        analyze_1d(&rowH.at(0, x), H, Kw, ext, bank.analysis_low,
                   bank.analysis_high, &dec.cV.at(0, x), &dec.cD.at(0, x), Kw);
    }
    return dec;
}

ImageGrid idwt2(const WaveletDecomposition& dec, const FilterBank& bank) {
    require_same_size(dec.cA, dec.cH, "idwt2");
    require_same_size(dec.cA, dec.cV, "idwt2");
    require_same_size(dec.cA, dec.cD, "idwt2");

    const Extension ext = extension_for(bank);
    const int Kh = dec.cA.height, Kw = dec.cA.width;
    const int H = 2 * Kh, W = 2 * Kw;

    ImageGrid rowL(H, Kw), rowH(H, Kw);
    for (int x = 0; x < Kw; ++x) {
        synthesize_1d(dec.cA.row(0) + x, dec.cH.row(0) + x, Kh, Kw, ext,
                      bank.synthesis_low, bank.synthesis_high, &rowL.at(0, x),
                      H, Kw);
        synthesize_1d(dec.cV.row(0) + x, dec.cD.row(0) + x, Kh, Kw, ext,
                      bank.synthesis_low, bank.synthesis_high, &rowH.at(0, x),
                      H, Kw);
    }
    ImageGrid padded(H, W);
    for (int y = 0; y < H; ++y)
        synthesize_1d(rowL.row(y), rowH.row(y), Kw, 1, ext, bank.synthesis_low,
                      bank.synthesis_high, padded.row(y), W, 1);

    const int oh = dec.orig_height > 0 ? dec.orig_height : H;
    const int ow = dec.orig_width > 0 ? dec.orig_width : W;
    if (oh == H && ow == W) return padded;
    ImageGrid out(oh, ow);
    for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x) out.at(y, x) = padded.at(y, x);
    return out;
}

}  // namespace edbsw
