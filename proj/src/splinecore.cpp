#include "edbsw/splinecore.hpp"

#include <cmath>

#include "edbsw/errors.hpp"

namespace edbsw {
namespace {

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw DomainError(std::string(what) + ": argument must be finite");
}

// sin(x)/x with the removable singularity handled by a 4th-order Taylor
// expansion; the caller decides the switch-over point.
double sinc_taylor(double x) {
    double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
}

// Shared denominator of Q/H: 451 - 512 cos(omega/16) + 64 cos(omega/8).
// Writing u = cos(omega/16) this is 128u^2 - 512u + 387, which attains its
// minimum 3 on u in [-1,1] at u = 1 — strictly positive for every real omega.
double q_denominator(double omega) {
    return 451.0 - 512.0 * std::cos(omega / 16.0) + 64.0 * std::cos(omega / 8.0);
}

double q_numerator(double omega) {
    return 451.0 - 512.0 * std::cos(omega / 8.0) + 64.0 * std::cos(omega / 4.0);
}

}  // namespace

double eval_bspline3(double t) {
    require_finite(t, "eval_bspline3");
    t = std::abs(t);            // central symmetry made bit-exact
    if (t >= 2.0) return 0.0;   // compact support, exact zero outside
    // signs (-1)^i and binomials C(4,i): 1, -4, 6, -4, 1; common factor 1/3!.
    static constexpr double kC[5] = {1.0, -4.0, 6.0, -4.0, 1.0};
    double acc = 0.0;
    for (int i = 0; i < 5; ++i) {
        double x = t + 2.0 - i;
        if (x > 0.0) acc += kC[i] * x * x * x;
    }
    return acc / 6.0;
}

double eval_special_spline(double t) {
    require_finite(t, "eval_special_spline");
    t = std::abs(t);
    if (t >= 2.0 + 0.125) return 0.0;
    double b0 = eval_bspline3(t);
    double b16 = eval_bspline3(t - 0.0625) + eval_bspline3(t + 0.0625);
    double b8 = eval_bspline3(t - 0.125) + eval_bspline3(t + 0.125);
    return (451.0 * b0 - 256.0 * b16 + 64.0 * b8) / 3.0;
}

double eval_spline_ft(double omega) {
    require_finite(omega, "eval_spline_ft");
    double x = omega / 2.0;
    double s = (std::abs(omega) < 1e-8) ? sinc_taylor(x) : std::sin(x) / x;
    double s2 = s * s;
    return q_denominator(omega) / 3.0 * (s2 * s2);
}

double eval_P(double y, int L) {
    require_finite(y, "eval_P");
    if (L < 1) throw DomainError("eval_P: L must be >= 1, got " + std::to_string(L));
    // C(L-1+n, n) built incrementally; the stepwise multiply-then-divide is
    // exact in integers because each prefix is itself a binomial coefficient.
    long long c = 1;
    double acc = 1.0, yn = 1.0;
    for (int n = 1; n <= L - 1; ++n) {
        c = c * (L - 1 + n) / n;
        yn *= y;
        acc += static_cast<double>(c) * yn;
    }
    return acc;
}

double eval_Q(double omega) {
    require_finite(omega, "eval_Q");
    double den = q_denominator(omega);
    if (std::abs(den) < 1e-9)
        throw SingularityError("eval_Q: response denominator vanished", omega);
    return q_numerator(omega) / den;
}

double eval_H(double omega) {
    require_finite(omega, "eval_H");
    double den = q_denominator(omega);
    if (std::abs(den) < 1e-9)
        throw SingularityError("eval_H: response denominator vanished", omega);
    double c = std::cos(omega / 2.0);
    double c2 = c * c;
    return q_numerator(omega) / den * (c2 * c2);
}

double eval_Hstar(double omega, int N_star) {
    require_finite(omega, "eval_Hstar");
    if (N_star < 1)
        throw DomainError("eval_Hstar: N_star must be >= 1, got " + std::to_string(N_star));
    // H* carries 1/Q, so the guard lands on Q's numerator here.
    double num = q_numerator(omega);
    if (std::abs(num) < 1e-9)
        throw SingularityError("eval_Hstar: response denominator vanished", omega);
    const int L = 2 + N_star;
    double c = std::cos(omega / 2.0);
    double s = std::sin(omega / 2.0);
    return std::pow(c * c, N_star) * eval_P(s * s, L) * (q_denominator(omega) / num);
}

FrequencyResponse response_S_hat() {
    return {FrequencyResponse::Kind::S_hat, 2, 0, 0, [](double w) { return eval_spline_ft(w); }};
}

FrequencyResponse response_H() {
    return {FrequencyResponse::Kind::H, 2, 0, 0, [](double w) { return eval_H(w); }};
}

FrequencyResponse response_Hstar(int N_star) {
    return {FrequencyResponse::Kind::H_star, 2, N_star, 2 + N_star,
            [N_star](double w) { return eval_Hstar(w, N_star); }};
}

FrequencyResponse response_Q() {
    return {FrequencyResponse::Kind::Q, 2, 0, 0, [](double w) { return eval_Q(w); }};
}

FrequencyResponse response_P(int L) {
    if (L < 1) throw DomainError("response_P: L must be >= 1");
    return {FrequencyResponse::Kind::P, 2, L - 2, L, [L](double w) {
                double s = std::sin(w / 2.0);
                return eval_P(s * s, L);
            }};
}

}  // namespace edbsw
