#ifndef QCONFORM_SPECIAL_FUNCTIONS_HPP
#define QCONFORM_SPECIAL_FUNCTIONS_HPP

#include <cmath>
#include <stdexcept>
#include <string>

// Special functions and combinatorial identities underlying the
// beta / beta-binomial machinery. All functions are pure and reentrant.

namespace qconform {

/// ln Gamma(x) for x > 0.
inline double log_gamma(double x) {
    if (!std::isfinite(x) || x <= 0.0) {
        throw std::domain_error("log_gamma: argument must be finite and > 0, got " +
                                std::to_string(x));
    }
    return std::lgamma(x);
}

/// ln B(a,b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a+b), symmetric in (a,b).
inline double log_beta(double a, double b) {
    if (!std::isfinite(a) || a <= 0.0 || !std::isfinite(b) || b <= 0.0) {
        throw std::domain_error("log_beta: arguments must be finite and > 0");
    }
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

/// Generalized binomial coefficient C(x,k) for real x and integer k.
/// 0 for k < 0, 1 for k == 0, prod_{i=1..k} (x-i+1)/i otherwise.
/// Total function; supports negative and non-integer x.
inline double binom_coeff(double x, long k) {
    if (k < 0) return 0.0;
    if (k == 0) return 1.0;
    double result = 1.0;
    for (long i = 1; i <= k; ++i) {
        result *= (x - static_cast<double>(i) + 1.0) / static_cast<double>(i);
    }
    return result;
}

/// log C(n,k) for integer 0 <= k <= n, via log-gamma.
inline double log_binom(long n, long k) {
    if (k < 0 || k > n) {
        throw std::domain_error("log_binom: require 0 <= k <= n");
    }
    if (k == 0 || k == n) return 0.0;
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

namespace detail {

// Continued fraction for the regularized incomplete beta function
// (modified Lentz). Valid for x < (a+1)/(a+b+2).
inline double inc_beta_cont_frac(double a, double b, double x) {
    constexpr int max_iter = 300;
    constexpr double eps = 1e-15;
    constexpr double fp_min = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fp_min) d = fp_min;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fp_min) d = fp_min;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fp_min) c = fp_min;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fp_min) d = fp_min;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fp_min) c = fp_min;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) return h;
    }
    throw std::runtime_error("reg_inc_beta: continued fraction did not converge");
}

} // namespace detail

/// Regularized incomplete beta function I_x(a,b), the CDF of BETA(a,b) at x.
/// Switches to the complement for x > (a+1)/(a+b+2) so both tails are
/// evaluated where the continued fraction converges fastest.
inline double reg_inc_beta(double x, double a, double b) {
    if (!std::isfinite(a) || a <= 0.0 || !std::isfinite(b) || b <= 0.0) {
        throw std::domain_error("reg_inc_beta: shape parameters must be finite and > 0");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::domain_error("reg_inc_beta: x must lie in [0,1]");
    }
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double ln_front =
        a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return std::exp(ln_front) * detail::inc_beta_cont_frac(a, b, x) / a;
    }
    return 1.0 - std::exp(ln_front) * detail::inc_beta_cont_frac(b, a, 1.0 - x) / b;
}

} // namespace qconform

#endif // QCONFORM_SPECIAL_FUNCTIONS_HPP
