#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace edbsw {

// A finite real filter tap sequence with an explicit integer index anchor:
// coeffs[i] is the tap at index first + i.
struct FilterSeq {
    int first = 0;
    std::vector<double> coeffs;

    int last() const { return first + static_cast<int>(coeffs.size()) - 1; }
    int length() const { return static_cast<int>(coeffs.size()); }
    double at_index(int n) const {
        int i = n - first;
        return (i >= 0 && i < length()) ? coeffs[static_cast<std::size_t>(i)] : 0.0;
    }
    double sum() const;
    double alternating_sum() const;  // sum of (-1)^n * tap(n)
    // normalized symbol (1/2) sum_n tap(n) e^{-i n omega}
    std::complex<double> dtft_half(double omega) const;
};

// Two-channel biorthogonal bank. Decomposition uses the analysis pair,
// reconstruction the synthesis pair. Low-pass taps follow the sum = 2
// convention (normalization tag "sum2"); high-pass sequences are derived by
// cross modulation: g_k = (-1)^k h*_{1-k} and g*_k = (-1)^k h_{1-k}, which is
// the index/range rule that actually cancels the alias term (see the
// verify_pr alias field — it comes out at machine zero).
struct FilterBank {
    std::string name;
    int L = 0;  // vanishing-moment sum for bcssw banks; 0 for standard banks
    FilterSeq analysis_low;    // h*
    FilterSeq analysis_high;   // g*
    FilterSeq synthesis_low;   // h
    FilterSeq synthesis_high;  // g
    std::string normalization = "sum2";
};

struct PRReport {
    int grid_size = 0;
    double max_deviation = 0.0;        // max |H conj(H*) + H(+pi) conj(H*(+pi)) - 1|
    double alias_max = 0.0;            // max |H conj(G*) + H(+pi) conj(G*(+pi))|
    double periodization_error = 0.0;  // cosine-fit error carried from construction
};

// Least-squares cosine-polynomial surrogate for a frequency response on
// [0, pi] (4096-point grid). `warning` flags a fit error above 1e-3.
struct PeriodizedQ {
    int degree = 0;
    std::vector<double> coeffs;  // q_m for cos(m omega), m = 0..degree
    double max_fit_error = 0.0;
    bool warning = false;

    double operator()(double omega) const;
};

// Fit the given response. The default target is Q (the ratio response of the
// special-spline derivation), which is not 2pi-periodic and therefore needs
// this surrogate before coefficients can exist at all.
PeriodizedQ periodize_response(int degree);
PeriodizedQ periodize_response(const std::function<double(double)>& response, int degree);

// Build the biorthogonal special-spline bank: cosine-fit Q at `degree`,
// extract H-tilde / H*-tilde coefficients by Simpson quadrature (>= 8192
// panels), truncate symmetrically to `taps`, re-pin the DC and Nyquist
// moments, and derive the high-pass pair. Throws FilterConstructionError when
// the PR screen (max_deviation > 1e-2) fails; ParamError on bad arguments
// (L < 3, even or < 5 taps, negative degree).
FilterBank derive_bcssw(int L, int degree = 10, int taps = 15, PRReport* report = nullptr);

// Classical comparison banks: haar, db2, coif1, sym4, rbio3.5. Every bank is
// re-verified at load (verify_pr max_deviation < 1e-8) so a transcription
// slip cannot survive. Unknown name -> LookupError.
FilterBank standard_bank(const std::string& name);

// Evaluate the perfect-reconstruction identity and the alias cross-term for
// the stored sequences on a uniform grid. grid_size < 64 -> ParamError.
PRReport verify_pr(const FilterBank& bank, int grid_size);

// Resolve a wavelet name from the CLI surface: "bcssw" builds the spline bank
// with the given parameters, anything else goes through standard_bank.
FilterBank bank_by_name(const std::string& name, int L = 4, int degree = 10, int taps = 15,
                        PRReport* report = nullptr);

// JSON document for the `filters` subcommand (17 significant digits,
// ascending index order).
std::string filterbank_json(const FilterBank& bank, const PRReport& report);

}  // namespace edbsw
