#pragma once

#include <functional>

namespace edbsw {

// Analytic building blocks for the spline filter-bank derivation: the cubic
// B-spline, the special spline S(t) built from it, their Fourier transforms,
// and the frequency responses H / H* / Q / P that define the biorthogonal
// pair. All are pure real-valued functions.

// beta3(t): cubic B-spline on [-2, 2] via the truncated-power sum
//   sum_{i=0}^{4} ((-1)^i / 3!) * C(4,i) * (t+2-i)^3 * step(t+2-i).
// Exactly 0 outside the support. Throws DomainError on non-finite t.
double eval_bspline3(double t);

// S(t) = (451/3) beta3(t) - (256/3)[beta3(t-1/16) + beta3(t+1/16)]
//      + (64/3)[beta3(t-1/8) + beta3(t+1/8)], support [-(2+1/8), 2+1/8].
double eval_special_spline(double t);

// S_hat(omega) = (451 - 512 cos(omega/16) + 64 cos(omega/8))/3 * sinc^4(omega/2).
// |omega| < 1e-8 is routed through a 4th-order Taylor expansion of sinc so the
// omega -> 0 limit is exactly 1.
double eval_spline_ft(double omega);

// P(y) = sum_{n=0}^{L-1} C(L-1+n, n) y^n (the Daubechies half-band
// polynomial; P(0) = 1). Throws DomainError when L < 1.
double eval_P(double y, int L);

// Q(omega) = (451 - 512 cos(omega/8) + 64 cos(omega/4))
//          / (451 - 512 cos(omega/16) + 64 cos(omega/8)).
// The denominator stays >= 3 for real omega; a magnitude below 1e-9 (only
// reachable through numeric corruption) raises SingularityError.
double eval_Q(double omega);

// H(omega) = Q(omega) * cos^4(omega/2) = S_hat(2 omega)/S_hat(omega).
double eval_H(double omega);

// H*(omega) = cos(omega/2)^(2 N_star) * P(sin^2(omega/2), L) / Q(omega) with
// N = 2 fixed, L = 2 + N_star. Throws DomainError when N_star < 1.
double eval_Hstar(double omega, int N_star);

// A named real frequency response omega -> value, carried around by the
// periodization machinery.
struct FrequencyResponse {
    enum class Kind { S_hat, H, H_star, G, G_star, Q, Q_star, P };
    Kind kind;
    int N = 2;       // vanishing-moment order of H (fixed by the derivation)
    int N_star = 0;  // vanishing-moment order of H*; 0 when not applicable
    int L = 0;       // N + N_star where applicable
    std::function<double(double)> evaluator;

    double operator()(double omega) const { return evaluator(omega); }
};

FrequencyResponse response_S_hat();
FrequencyResponse response_H();
FrequencyResponse response_Hstar(int N_star);
FrequencyResponse response_Q();
FrequencyResponse response_P(int L);  // evaluated at y = sin^2(omega/2)

}  // namespace edbsw
