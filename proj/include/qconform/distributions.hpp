#ifndef QCONFORM_DISTRIBUTIONS_HPP
#define QCONFORM_DISTRIBUTIONS_HPP

#include <cmath>
#include <stdexcept>
#include <string>

#include "qconform/special_functions.hpp"

// Beta, univariate beta-binomial and bivariate beta-binomial distributions,
// with the conjugate posterior constructors. All PMF/CDF arithmetic runs in
// log space and exponentiates last so that beta-function ratios stay
// representable up to trial counts of a few thousand.

namespace qconform {

/// Shape parameters (a, b) of a beta distribution, both strictly positive.
struct BetaParams {
    double a;
    double b;

    BetaParams(double a_, double b_) : a(a_), b(b_) {
        if (!std::isfinite(a) || a <= 0.0 || !std::isfinite(b) || b <= 0.0) {
            throw std::domain_error("BetaParams: shapes must be finite and > 0");
        }
    }

    double mean() const { return a / (a + b); }
};

/// Beta density at x; zero outside (0,1).
inline double beta_pdf(const BetaParams& p, double x) {
    if (!(x > 0.0 && x < 1.0)) return 0.0;
    return std::exp((p.a - 1.0) * std::log(x) + (p.b - 1.0) * std::log1p(-x) -
                    log_beta(p.a, p.b));
}

/// Beta CDF at x, clamped to {0,1} outside the unit interval.
inline double beta_cdf(const BetaParams& p, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return reg_inc_beta(x, p.a, p.b);
}

/// Quantile of BETA(a,b) at level rho in (0,1). Bracketing bisection with
/// safeguarded Newton refinement; robust for a < 1 where the density is
/// unbounded at 0.
inline double beta_quantile(const BetaParams& p, double rho) {
    if (!(rho > 0.0 && rho < 1.0)) {
        throw std::domain_error("beta_quantile: level must lie in (0,1)");
    }
    double lo = 0.0;
    double hi = 1.0;
    double x = p.mean();
    const double log_norm = log_beta(p.a, p.b);
    for (int iter = 0; iter < 200; ++iter) {
        const double f = beta_cdf(p, x) - rho;
        if (std::fabs(f) <= 1e-15 * std::min(rho, 1.0 - rho)) return x;
        if (f > 0.0) hi = x; else lo = x;
        // Newton step on the CDF; fall back to bisection when the step
        // leaves the bracket or the density is not usable.
        double x_next = 0.5 * (lo + hi);
        if (x > 0.0 && x < 1.0) {
            const double log_pdf = (p.a - 1.0) * std::log(x) +
                                   (p.b - 1.0) * std::log1p(-x) - log_norm;
            if (log_pdf > -700.0) {
                const double step = f / std::exp(log_pdf);
                const double cand = x - step;
                if (cand > lo && cand < hi) x_next = cand;
            }
        }
        if (hi - lo < 1e-16 * std::max(1.0, x)) return 0.5 * (lo + hi);
        x = x_next;
    }
    return x;
}

/// Beta-binomial distribution: trials n with success probability drawn
/// once from BETA(a,b). n = 0 is the degenerate point mass at 0.
struct BetaBinomial {
    long n;
    BetaParams shape;

    BetaBinomial(long n_, BetaParams shape_) : n(n_), shape(shape_) {
        if (n < 0) {
            throw std::domain_error("BetaBinomial: trial count must be >= 0");
        }
    }
};

namespace detail {

inline double betabin_log_pmf(const BetaBinomial& d, long z) {
    return log_binom(d.n, z) +
           log_beta(static_cast<double>(z) + d.shape.a,
                    static_cast<double>(d.n - z) + d.shape.b) -
           log_beta(d.shape.a, d.shape.b);
}

} // namespace detail

/// PMF of the beta-binomial at z; zero outside {0,...,n}.
inline double betabin_pmf(const BetaBinomial& d, long z) {
    if (z < 0 || z > d.n) return 0.0;
    if (d.n == 0) return 1.0;
    return std::exp(detail::betabin_log_pmf(d, z));
}

/// CDF of the beta-binomial at z, summed from the nearer tail.
inline double betabin_cdf(const BetaBinomial& d, long z) {
    if (z < 0) return 0.0;
    if (z >= d.n) return 1.0;
    if (2 * z <= d.n) {
        double s = 0.0;
        for (long k = 0; k <= z; ++k) s += betabin_pmf(d, k);
        return std::min(s, 1.0);
    }
    double s = 0.0;
    for (long k = d.n; k > z; --k) s += betabin_pmf(d, k);
    return std::max(0.0, 1.0 - s);
}

/// Joint law of two conditionally independent binomials (n1, n2) sharing one
/// beta-distributed success probability.
struct BivariateBetaBinomial {
    long n1;
    long n2;
    BetaParams shape;

    BivariateBetaBinomial(long n1_, long n2_, BetaParams shape_)
        : n1(n1_), n2(n2_), shape(shape_) {
        if (n1 < 0 || n2 < 0) {
            throw std::domain_error(
                "BivariateBetaBinomial: trial counts must be >= 0");
        }
    }
};

/// Joint PMF at (z1, z2); zero off the grid {0..n1} x {0..n2}.
inline double bibetabin_pmf(const BivariateBetaBinomial& d, long z1, long z2) {
    if (z1 < 0 || z1 > d.n1 || z2 < 0 || z2 > d.n2) return 0.0;
    const double zs = static_cast<double>(z1 + z2);
    const double ns = static_cast<double>(d.n1 + d.n2);
    return std::exp(log_binom(d.n1, z1) + log_binom(d.n2, z2) +
                    log_beta(d.shape.a + zs, d.shape.b + ns - zs) -
                    log_beta(d.shape.a, d.shape.b));
}

/// Posterior beta for a process proportion after observing y nonconforming
/// units in n: BETA(a+y, b+n-y).
inline BetaParams posterior_process(const BetaParams& prior, long n, long y) {
    if (n < 0 || y < 0 || y > n) {
        throw std::domain_error("posterior_process: require 0 <= y <= n");
    }
    return BetaParams(prior.a + static_cast<double>(y),
                      prior.b + static_cast<double>(n - y));
}

/// Posterior law of the uninspected lot remainder X - Y after observing y
/// nonconforming units in a sample of n from a lot of N:
/// BETA-Bi(N-n, a+y, b+n-y). The law of X itself is this shifted by +y.
inline BetaBinomial posterior_lot_remainder(const BetaParams& prior, long N,
                                            long n, long y) {
    if (N < 0 || n < 0 || n > N) {
        throw std::domain_error("posterior_lot_remainder: require 0 <= n <= N");
    }
    if (y < 0 || y > n) {
        throw std::domain_error("posterior_lot_remainder: require 0 <= y <= n");
    }
    return BetaBinomial(N - n, posterior_process(prior, n, y));
}

} // namespace qconform

#endif // QCONFORM_DISTRIBUTIONS_HPP
