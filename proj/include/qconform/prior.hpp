#ifndef QCONFORM_PRIOR_HPP
#define QCONFORM_PRIOR_HPP

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "qconform/distributions.hpp"

// Fitting beta priors from elicited summaries (mean, quantile, fixed first
// shape) plus the built-in table of representative priors.

namespace qconform {

/// Raised when the elicited constraints admit no beta distribution.
struct ElicitationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Elicited summary constraints. Exactly two independent constraints must be
/// supplied: mean + quantile, fixed_a + mean, or fixed_a + quantile. The
/// support is fixed at [0,1]; truncated supports are rejected.
struct ElicitationSpec {
    std::optional<double> mean;
    std::optional<double> quantile_level;   // rho
    std::optional<double> quantile_value;   // p_rho with F(p_rho) = rho
    std::optional<double> fixed_a;
    double support_lo = 0.0;
    double support_hi = 1.0;
};

/// Closed form for a = 1: F(x) = 1 - (1-x)^b, so b = ln(1-rho)/ln(1-p_rho).
inline BetaParams elicit_a1_from_quantile(double rho, double p_rho) {
    if (!(rho > 0.0 && rho < 1.0) || !(p_rho > 0.0 && p_rho < 1.0)) {
        throw std::domain_error(
            "elicit_a1_from_quantile: probabilities must lie in (0,1)");
    }
    return BetaParams(1.0, std::log1p(-rho) / std::log1p(-p_rho));
}

namespace detail {

// Monotone 1-D solve of g(a) = F_{BETA(a, b(a))}(p_rho) - rho = 0 where
// b(a) = a(1-mu)/mu is forced by the mean. Bisection in log(a) over
// [1e-6, 1e6].
inline BetaParams elicit_mean_quantile(double mu, double rho, double p_rho) {
    const auto params_for = [&](double a) {
        return BetaParams(a, a * (1.0 - mu) / mu);
    };
    const auto residual = [&](double a) {
        return beta_cdf(params_for(a), p_rho) - rho;
    };
    // The residual need not be monotone over the whole range: when the
    // quantile value sits above 1 - rho the profile dips and recovers,
    // leaving two roots. Scan a log-spaced grid and keep the rightmost sign
    // change; the larger-a root is the informative (unimodal-leaning) fit.
    constexpr int grid = 240;
    const double log_min = std::log(1e-6);
    const double log_max = std::log(1e6);
    double log_lo = 0.0, log_hi = 0.0, g_lo = 0.0;
    bool bracketed = false;
    double prev_log = log_min;
    double prev_g = residual(std::exp(prev_log));
    if (prev_g == 0.0) return params_for(std::exp(prev_log));
    for (int i = 1; i <= grid; ++i) {
        const double cur_log = log_min + (log_max - log_min) * i / grid;
        const double cur_g = residual(std::exp(cur_log));
        if (cur_g == 0.0) return params_for(std::exp(cur_log));
        if ((prev_g > 0.0) != (cur_g > 0.0)) {
            log_lo = prev_log;
            log_hi = cur_log;
            g_lo = prev_g;
            bracketed = true;
        }
        prev_log = cur_log;
        prev_g = cur_g;
    }
    if (!bracketed) {
        throw ElicitationError(
            "elicit: mean and quantile constraints are inconsistent (no beta "
            "distribution matches both)");
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double log_mid = 0.5 * (log_lo + log_hi);
        const double g_mid = residual(std::exp(log_mid));
        if (g_mid == 0.0 || log_hi - log_lo < 1e-14) {
            break;
        }
        if ((g_mid > 0.0) == (g_lo > 0.0)) {
            log_lo = log_mid;
            g_lo = g_mid;
        } else {
            log_hi = log_mid;
        }
    }
    const BetaParams fit = params_for(std::exp(0.5 * (log_lo + log_hi)));
    if (std::fabs(beta_cdf(fit, p_rho) - rho) > 1e-9) {
        throw ElicitationError("elicit: quantile constraint not met after "
                               "iteration cap (residual too large)");
    }
    return fit;
}

// Fixed a, quantile constraint: F is increasing in b, bisection in log(b).
inline BetaParams elicit_fixed_a_quantile(double a, double rho, double p_rho) {
    const auto residual = [&](double b) {
        return beta_cdf(BetaParams(a, b), p_rho) - rho;
    };
    double log_lo = std::log(1e-6);
    double log_hi = std::log(1e9);
    double g_lo = residual(std::exp(log_lo));
    double g_hi = residual(std::exp(log_hi));
    if ((g_lo > 0.0) == (g_hi > 0.0)) {
        throw ElicitationError(
            "elicit: fixed_a and quantile constraints are inconsistent");
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double log_mid = 0.5 * (log_lo + log_hi);
        const double g_mid = residual(std::exp(log_mid));
        if (g_mid == 0.0 || log_hi - log_lo < 1e-14) break;
        if ((g_mid > 0.0) == (g_lo > 0.0)) {
            log_lo = log_mid;
            g_lo = g_mid;
        } else {
            log_hi = log_mid;
        }
    }
    const BetaParams fit(a, std::exp(0.5 * (log_lo + log_hi)));
    if (std::fabs(beta_cdf(fit, p_rho) - rho) > 1e-9) {
        throw ElicitationError("elicit: quantile constraint not met after "
                               "iteration cap (residual too large)");
    }
    return fit;
}

} // namespace detail

/// Fit beta parameters from an elicitation spec.
inline BetaParams elicit(const ElicitationSpec& spec) {
    if (spec.support_lo != 0.0 || spec.support_hi != 1.0) {
        throw ElicitationError(
            "elicit: only the full support [0,1] is available; truncated "
            "supports are not implemented");
    }
    const bool has_quantile =
        spec.quantile_level.has_value() || spec.quantile_value.has_value();
    if (has_quantile &&
        (!spec.quantile_level.has_value() || !spec.quantile_value.has_value())) {
        throw ElicitationError(
            "elicit: a quantile constraint needs both its level and value");
    }
    if (has_quantile) {
        const double rho = *spec.quantile_level;
        const double p_rho = *spec.quantile_value;
        if (!(rho > 0.0 && rho < 1.0) || !(p_rho > 0.0 && p_rho < 1.0)) {
            throw std::domain_error(
                "elicit: quantile level and value must lie in (0,1)");
        }
    }
    if (spec.mean.has_value() && !(*spec.mean > 0.0 && *spec.mean < 1.0)) {
        throw std::domain_error("elicit: mean must lie in (0,1)");
    }
    if (spec.fixed_a.has_value() && !(*spec.fixed_a > 0.0)) {
        throw std::domain_error("elicit: fixed_a must be > 0");
    }

    const int n_constraints = (spec.mean.has_value() ? 1 : 0) +
                              (has_quantile ? 1 : 0) +
                              (spec.fixed_a.has_value() ? 1 : 0);
    if (n_constraints != 2) {
        throw ElicitationError(
            "elicit: exactly two independent constraints are required "
            "(mean+quantile, fixed_a+mean, or fixed_a+quantile)");
    }

    if (spec.fixed_a.has_value() && spec.mean.has_value()) {
        const double mu = *spec.mean;
        return BetaParams(*spec.fixed_a, *spec.fixed_a * (1.0 - mu) / mu);
    }
    if (spec.fixed_a.has_value()) {
        return detail::elicit_fixed_a_quantile(*spec.fixed_a,
                                               *spec.quantile_level,
                                               *spec.quantile_value);
    }
    const double mu = *spec.mean;
    const double rho = *spec.quantile_level;
    const double p_rho = *spec.quantile_value;
    if (rho > 0.5 && mu >= p_rho) {
        throw ElicitationError(
            "elicit: mean must lie below the upper-tail quantile value");
    }
    return detail::elicit_mean_quantile(mu, rho, p_rho);
}

/// One row of the built-in prior table: shapes with the tabulated mean and
/// 99% quantile.
struct PriorPreset {
    double a;
    double b;
    double mean;
    double q99;
};

/// The 8 built-in representative priors.
inline const std::array<PriorPreset, 8>& preset_table() {
    static const std::array<PriorPreset, 8> table = {{
        {1.00, 1.00, 0.500, 0.990},
        {0.78, 25.21, 0.030, 0.150},
        {0.67, 32.67, 0.020, 0.110},
        {0.57, 37.67, 0.015, 0.090},
        {0.52, 46.79, 0.011, 0.070},
        {0.43, 60.46, 0.007, 0.050},
        {0.35, 69.50, 0.005, 0.040},
        {0.24, 78.12, 0.003, 0.030},
    }};
    return table;
}

inline const PriorPreset& preset_by_index(int index) {
    if (index < 1 || index > 8) {
        throw std::domain_error("preset_by_index: index must be in 1..8");
    }
    return preset_table()[static_cast<std::size_t>(index - 1)];
}

} // namespace qconform

#endif // QCONFORM_PRIOR_HPP
