#include "edbsw/filterbank.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "edbsw/errors.hpp"
#include "edbsw/splinecore.hpp"

namespace edbsw {
namespace {

using std::numbers::pi;

// ---------------------------------------------------------------------------
// small dense SPD solver (normal equations are tiny: degree+1 <= ~40)
// ---------------------------------------------------------------------------
std::vector<double> solve_spd(std::vector<double> A, std::vector<double> b, int n) {
    // in-place Cholesky A = L L^T
    for (int j = 0; j < n; ++j) {
        double d = A[j * n + j];
        for (int k = 0; k < j; ++k) d -= A[j * n + k] * A[j * n + k];
        if (d <= 0.0) throw ConvergenceError("normal equations lost positive definiteness", d);
        double ljj = std::sqrt(d);
        A[j * n + j] = ljj;
        for (int i = j + 1; i < n; ++i) {
            double s = A[i * n + j];
            for (int k = 0; k < j; ++k) s -= A[i * n + k] * A[j * n + k];
            A[i * n + j] = s / ljj;
        }
    }
    // L y = b
    for (int i = 0; i < n; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k) s -= A[i * n + k] * b[k];
        b[i] = s / A[i * n + i];
    }
    // L^T x = y
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int k = i + 1; k < n; ++k) s -= A[k * n + i] * b[k];
        b[i] = s / A[i * n + i];
    }
    return b;
}

// composite Simpson on [0, pi] with an even panel count
double simpson_0_pi(const std::function<double(double)>& f, int panels) {
    const double h = pi / panels;
    double acc = f(0.0) + f(pi);
    for (int i = 1; i < panels; ++i) acc += ((i & 1) ? 4.0 : 2.0) * f(i * h);
    return acc * h / 3.0;
}

// g_k = (-1)^k * low_{1-k}; covers exactly the reflected index range.
FilterSeq modulate_highpass(const FilterSeq& low) {
    FilterSeq g;
    g.first = 1 - low.last();
    g.coeffs.resize(static_cast<std::size_t>(low.length()));
    for (int k = g.first; k <= 1 - low.first; ++k) {
        double sign = (k % 2 == 0) ? 1.0 : -1.0;
        g.coeffs[static_cast<std::size_t>(k - g.first)] = sign * low.at_index(1 - k);
    }
    return g;
}

void attach_highpass(FilterBank& bank) {
    bank.analysis_high = modulate_highpass(bank.synthesis_low);
    bank.synthesis_high = modulate_highpass(bank.analysis_low);
}

void screen_standard(FilterBank& bank) {
    attach_highpass(bank);
    PRReport rep = verify_pr(bank, 1024);
    if (rep.max_deviation >= 1e-8)
        throw FilterConstructionError(
            "bundled bank '" + bank.name + "' failed its load-time biorthogonality check",
            rep.max_deviation);
}

void append_number(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

void append_array(std::string& out, const char* key, const FilterSeq& seq) {
    out += "  \"";
    out += key;
    out += "\": [";
    for (std::size_t i = 0; i < seq.coeffs.size(); ++i) {
        if (i) out += ", ";
        append_number(out, seq.coeffs[i]);
    }
    out += "]";
}

}  // namespace

double FilterSeq::sum() const {
    double s = 0.0;
    for (double c : coeffs) s += c;
    return s;
}

double FilterSeq::alternating_sum() const {
    double s = 0.0;
    for (int n = first; n <= last(); ++n)
        s += ((n % 2 == 0) ? 1.0 : -1.0) * coeffs[static_cast<std::size_t>(n - first)];
    return s;
}

std::complex<double> FilterSeq::dtft_half(double omega) const {
    std::complex<double> acc{0.0, 0.0};
    for (int n = first; n <= last(); ++n) {
        double phase = -omega * n;
        acc += coeffs[static_cast<std::size_t>(n - first)] *
               std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return 0.5 * acc;
}

double PeriodizedQ::operator()(double omega) const {
    double acc = 0.0;
    for (std::size_t m = 0; m < coeffs.size(); ++m) acc += coeffs[m] * std::cos(m * omega);
    return acc;
}

PeriodizedQ periodize_response(const std::function<double(double)>& response, int degree) {
    if (degree < 0) throw ParamError("periodize_response: degree must be >= 0");
    const int M = 4096;
    const int n = degree + 1;
    std::vector<double> omega(M), y(M);
    for (int i = 0; i < M; ++i) {
        omega[i] = pi * i / (M - 1);
        y[i] = response(omega[i]);
    }
    std::vector<double> N(static_cast<std::size_t>(n) * n, 0.0), r(n, 0.0);
    std::vector<double> basis(n);
    for (int i = 0; i < M; ++i) {
        for (int m = 0; m < n; ++m) basis[m] = std::cos(m * omega[i]);
        for (int a = 0; a < n; ++a) {
            r[a] += basis[a] * y[i];
            for (int b = a; b < n; ++b) N[a * n + b] += basis[a] * basis[b];
        }
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < a; ++b) N[a * n + b] = N[b * n + a];

    PeriodizedQ pq;
    pq.degree = degree;
    pq.coeffs = solve_spd(std::move(N), std::move(r), n);
    for (int i = 0; i < M; ++i)
        pq.max_fit_error = std::max(pq.max_fit_error, std::abs(pq(omega[i]) - y[i]));
    pq.warning = pq.max_fit_error > 1e-3;
    return pq;
}

PeriodizedQ periodize_response(int degree) {
    return periodize_response([](double w) { return eval_Q(w); }, degree);
}

FilterBank derive_bcssw(int L, int degree, int taps, PRReport* report) {
    if (L < 3) throw ParamError("derive_bcssw: L must be >= 3, got " + std::to_string(L));
    if (taps < 5 || taps % 2 == 0)
        throw ParamError("derive_bcssw: taps must be odd and >= 5, got " + std::to_string(taps));
    PeriodizedQ pq = periodize_response(degree);

    auto H_tilde = [&pq](double w) {
        double c = std::cos(w / 2.0);
        double c2 = c * c;
        return (c2 * c2) * pq(w);
    };
    auto Hstar_tilde = [&pq, L](double w) {
        double q = pq(w);
        if (std::abs(q) < 1e-9)
            throw SingularityError("derive_bcssw: periodized response vanished", w);
        double c = std::cos(w / 2.0);
        double s = std::sin(w / 2.0);
        return std::pow(c * c, L - 2) * eval_P(s * s, L) / q;
    };

    const int K = (taps - 1) / 2;
    const int panels = 8192;
    auto extract = [&](const std::function<double(double)>& resp) {
        std::vector<double> half(static_cast<std::size_t>(K) + 1);
        for (int n = 0; n <= K; ++n)
            half[static_cast<std::size_t>(n)] =
                2.0 / pi *
                simpson_0_pi([&](double w) { return resp(w) * std::cos(n * w); }, panels);
        FilterSeq seq;
        seq.first = -K;
        seq.coeffs.resize(static_cast<std::size_t>(taps));
        for (int n = -K; n <= K; ++n)
            seq.coeffs[static_cast<std::size_t>(n + K)] = half[static_cast<std::size_t>(std::abs(n))];
        return seq;
    };

    // Hard truncation shifts the DC/Nyquist moments a little; re-pin them with
    // the minimal-norm correction a + b(-1)^n so a constant image transforms
    // exactly (sum = 2) and the derived high-pass exactly kills constants
    // (alternating sum = 0). The correction preserves symmetry.
    auto repin_moments = [&](FilterSeq& seq) {
        const double M = taps;
        const double S = (K % 2 == 0) ? 1.0 : -1.0;  // sum of (-1)^n over [-K, K]
        const double e1 = 2.0 - seq.sum();
        const double e2 = -seq.alternating_sum();
        const double det = M * M - S * S;
        const double a = (M * e1 - S * e2) / det;
        const double b = (M * e2 - S * e1) / det;
        for (int n = -K; n <= K; ++n)
            seq.coeffs[static_cast<std::size_t>(n + K)] += a + ((n % 2 == 0) ? b : -b);
    };

    FilterBank bank;
    bank.name = "bcssw";
    bank.L = L;
    bank.synthesis_low = extract(H_tilde);
    bank.analysis_low = extract(Hstar_tilde);
    repin_moments(bank.synthesis_low);
    repin_moments(bank.analysis_low);
    attach_highpass(bank);

    PRReport rep = verify_pr(bank, 4096);
    rep.periodization_error = pq.max_fit_error;
    if (rep.max_deviation > 1e-2)
        throw FilterConstructionError("filter bank failed biorthogonality screen",
                                      rep.max_deviation);
    if (report) *report = rep;
    return bank;
}

FilterBank standard_bank(const std::string& name) {
    FilterBank bank;
    bank.name = name;
    if (name == "haar") {
        bank.synthesis_low = {0, {1.0, 1.0}};
        bank.analysis_low = bank.synthesis_low;
    } else if (name == "db2") {
        const double s3 = std::sqrt(3.0);
        bank.synthesis_low = {0, {(1 + s3) / 4, (3 + s3) / 4, (3 - s3) / 4, (1 - s3) / 4}};
        bank.analysis_low = bank.synthesis_low;
    } else if (name == "coif1") {
        const double s7 = std::sqrt(7.0);
        bank.synthesis_low = {-2,
                              {(1 - s7) / 16, (5 + s7) / 16, (14 + 2 * s7) / 16,
                               (14 - 2 * s7) / 16, (1 - s7) / 16, (-3 + s7) / 16}};
        bank.analysis_low = bank.synthesis_low;
    } else if (name == "sym4") {
        bank.synthesis_low = {0,
                              {0.04557034589596218, -0.01782470144167111, -0.14031762417854313,
                               0.42123453420357670, 1.13665824340763955, 0.70373906865629998,
                               -0.04191096512505864, -0.10714890141820543}};
        bank.analysis_low = bank.synthesis_low;
    } else if (name == "rbio3.5") {
        bank.synthesis_low = {-5, {-5.0 / 256, 15.0 / 256, 19.0 / 256, -97.0 / 256, -26.0 / 256,
                                   350.0 / 256, 350.0 / 256, -26.0 / 256, -97.0 / 256, 19.0 / 256,
                                   15.0 / 256, -5.0 / 256}};
        bank.analysis_low = {-1, {0.25, 0.75, 0.75, 0.25}};
    } else {
        throw LookupError("standard_bank: unknown wavelet '" + name + "'");
    }
    screen_standard(bank);
    return bank;
}

PRReport verify_pr(const FilterBank& bank, int grid_size) {
    if (grid_size < 64) throw ParamError("verify_pr: grid_size must be >= 64");
    PRReport rep;
    rep.grid_size = grid_size;
    for (int j = 0; j < grid_size; ++j) {
        double w = -pi + 2.0 * pi * j / grid_size;
        auto H0 = bank.synthesis_low.dtft_half(w);
        auto H1 = bank.synthesis_low.dtft_half(w + pi);
        auto Hs0 = bank.analysis_low.dtft_half(w);
        auto Hs1 = bank.analysis_low.dtft_half(w + pi);
        auto Gs0 = bank.analysis_high.dtft_half(w);
        auto Gs1 = bank.analysis_high.dtft_half(w + pi);
        double dev = std::abs(H0 * std::conj(Hs0) + H1 * std::conj(Hs1) - 1.0);
        double alias = std::abs(H0 * std::conj(Gs0) + H1 * std::conj(Gs1));
        rep.max_deviation = std::max(rep.max_deviation, dev);
        rep.alias_max = std::max(rep.alias_max, alias);
    }
    return rep;
}

FilterBank bank_by_name(const std::string& name, int L, int degree, int taps, PRReport* report) {
    if (name == "bcssw") return derive_bcssw(L, degree, taps, report);
    FilterBank bank = standard_bank(name);
    if (report) *report = verify_pr(bank, 1024);
    return bank;
}

std::string filterbank_json(const FilterBank& bank, const PRReport& report) {
    std::string out = "{\n  \"name\": \"" + bank.name + "\",\n";
    out += "  \"L\": " + std::to_string(bank.L) + ",\n";
    out += "  \"taps\": " + std::to_string(bank.synthesis_low.length()) + ",\n";
    append_array(out, "synthesis_low", bank.synthesis_low);
    out += ",\n";
    append_array(out, "analysis_low", bank.analysis_low);
    out += ",\n";
    append_array(out, "synthesis_high", bank.synthesis_high);
    out += ",\n";
    append_array(out, "analysis_high", bank.analysis_high);
    out += ",\n  \"pr_max_deviation\": ";
    append_number(out, report.max_deviation);
    out += ",\n  \"periodization_error\": ";
    append_number(out, report.periodization_error);
    out += "\n}\n";
    return out;
}

}  // namespace edbsw
