#ifndef QCONFORM_CONFORMITY_HPP
#define QCONFORM_CONFORMITY_HPP

#include <cmath>
#include <optional>
#include <stdexcept>

#include "qconform/distributions.hpp"

// Conformance probabilities and consumer's/producer's risk indicators for a
// process proportion nonconforming (beta posterior) and for a finite lot
// count (shifted beta-binomial posterior), plus the binomial OC view of
// specific risks conditioned on a known proportion.

namespace qconform {

namespace detail {

inline void check_plan(long n, long c) {
    if (n < 0 || c < 0 || c > n) {
        throw std::domain_error("require 0 <= c <= n");
    }
}

inline void check_sample(long n, long y) {
    if (n < 0 || y < 0 || y > n) {
        throw std::domain_error("require 0 <= y <= n");
    }
}

inline void check_proportion_limit(double x_c) {
    if (!(x_c >= 0.0 && x_c <= 1.0)) {
        throw std::domain_error("process tolerance limit must lie in [0,1]");
    }
}

inline void check_count_limit(long x_c, long N) {
    if (x_c < 0 || x_c > N) {
        throw std::domain_error("lot tolerance limit must lie in {0,...,N}");
    }
}

} // namespace detail

enum class RiskSide { consumer, producer };

/// Specific (conditional) risk: consumer side when the sample accepts,
/// producer side when it rejects. Exactly one side applies for a given y.
struct SpecificRisk {
    RiskSide side;
    double value;
};

struct GlobalRisks {
    double consumer;
    double producer;
};

// ---------------------------------------------------------------------------
// Process case: target is the process proportion nonconforming.
// ---------------------------------------------------------------------------

/// P(X <= x_C | Y = y) = F_{BETA(a+y, b+n-y)}(x_C).
inline double process_conformance_prob(const BetaParams& prior, long n, long y,
                                       double x_c) {
    detail::check_sample(n, y);
    detail::check_proportion_limit(x_c);
    return beta_cdf(posterior_process(prior, n, y), x_c);
}

inline SpecificRisk process_specific_risk(const BetaParams& prior, long n,
                                          long y, long c, double x_c) {
    detail::check_plan(n, c);
    const double p_conform = process_conformance_prob(prior, n, y, x_c);
    if (y <= c) return {RiskSide::consumer, 1.0 - p_conform};
    return {RiskSide::producer, p_conform};
}

/// Global risks: beta-binomial mixture over the acceptance/rejection split.
inline GlobalRisks process_global_risks(const BetaParams& prior, long n, long c,
                                        double x_c) {
    detail::check_plan(n, c);
    detail::check_proportion_limit(x_c);
    const BetaBinomial sample_law(n, prior);
    double r_con = 0.0;
    double r_pro = 0.0;
    for (long y = 0; y <= n; ++y) {
        const double weight = betabin_pmf(sample_law, y);
        const double p_conform = beta_cdf(posterior_process(prior, n, y), x_c);
        if (y <= c) {
            r_con += weight * (1.0 - p_conform);
        } else {
            r_pro += weight * p_conform;
        }
    }
    return {r_con, r_pro};
}

// ---------------------------------------------------------------------------
// Lot case: target is the count of nonconforming units in a lot of N.
// ---------------------------------------------------------------------------

/// P(X <= x_C | Y = y) = F_{BETA-Bi(N-n, a+y, b+n-y)}(x_C - y).
/// Zero when y > x_C: the sample alone already violates the tolerance.
inline double lot_conformance_prob(const BetaParams& prior, long N, long n,
                                   long y, long x_c) {
    detail::check_count_limit(x_c, N);
    return betabin_cdf(posterior_lot_remainder(prior, N, n, y), x_c - y);
}

inline SpecificRisk lot_specific_risk(const BetaParams& prior, long N, long n,
                                      long y, long c, long x_c) {
    detail::check_plan(n, c);
    const double p_conform = lot_conformance_prob(prior, N, n, y, x_c);
    if (y <= c) return {RiskSide::consumer, 1.0 - p_conform};
    return {RiskSide::producer, p_conform};
}

inline GlobalRisks lot_global_risks(const BetaParams& prior, long N, long n,
                                    long c, long x_c) {
    detail::check_plan(n, c);
    if (n > N) throw std::domain_error("lot_global_risks: require n <= N");
    detail::check_count_limit(x_c, N);
    const BetaBinomial sample_law(n, prior);
    double r_con = 0.0;
    double r_pro = 0.0;
    for (long y = 0; y <= n; ++y) {
        const double weight = betabin_pmf(sample_law, y);
        const double p_conform =
            betabin_cdf(posterior_lot_remainder(prior, N, n, y), x_c - y);
        if (y <= c) {
            r_con += weight * (1.0 - p_conform);
        } else {
            r_pro += weight * p_conform;
        }
    }
    return {r_con, r_pro};
}

// ---------------------------------------------------------------------------
// ISO 3534-2 view: probabilities of the assessment outcome conditioned on a
// known proportion nonconforming (binomial OC values).
// ---------------------------------------------------------------------------

enum class IsoConditioning { process, lot };

struct IsoRisks {
    double accept_prob;
    double reject_prob;
};

/// Acceptance/rejection probabilities of plan (n,c) under process
/// conditioning: accept_prob = sum_{y<=c} C(n,y) p^y (1-p)^{n-y}.
/// Lot (hypergeometric) conditioning is out of scope and rejected.
inline IsoRisks iso_specific_risks(long n, long c, double p,
                                   IsoConditioning conditioning =
                                       IsoConditioning::process) {
    detail::check_plan(n, c);
    if (conditioning == IsoConditioning::lot) {
        throw std::logic_error(
            "iso_specific_risks: lot (hypergeometric) conditioning is not "
            "implemented");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::domain_error("iso_specific_risks: p must lie in [0,1]");
    }
    double accept;
    if (p == 0.0) {
        accept = 1.0;
    } else if (p == 1.0) {
        accept = (c >= n) ? 1.0 : 0.0;
    } else {
        // Binomial CDF at c, with terms in log space; sum from the nearer
        // tail to bound accumulated rounding error.
        const double log_p = std::log(p);
        const double log_q = std::log1p(-p);
        auto log_term = [&](long y) {
            return log_binom(n, y) + static_cast<double>(y) * log_p +
                   static_cast<double>(n - y) * log_q;
        };
        if (2 * c <= n) {
            double s = 0.0;
            for (long y = 0; y <= c; ++y) s += std::exp(log_term(y));
            accept = std::min(s, 1.0);
        } else {
            double s = 0.0;
            for (long y = n; y > c; --y) s += std::exp(log_term(y));
            accept = std::max(0.0, 1.0 - s);
        }
    }
    return {accept, 1.0 - accept};
}

// ---------------------------------------------------------------------------
// Scenario reports.
// ---------------------------------------------------------------------------

/// Per-scenario bundle of conformance probability, risks and the residual of
/// the identity R_Con = P(Y in A) - P(X in C) + R_Pro.
struct ConformityReport {
    double p_conform_given_y;
    std::optional<double> specific_consumer_risk;  // set when y <= c
    std::optional<double> specific_producer_risk;  // set when y >= c+1
    double global_consumer_risk;
    double global_producer_risk;
    double accept_prob;         // P(Y in A)
    double prior_conform_prob;  // P(X in C)
    double identity_residual;
};

inline ConformityReport assess_process(const BetaParams& prior, long n, long y,
                                       long c, double x_c) {
    detail::check_plan(n, c);
    detail::check_sample(n, y);
    ConformityReport report{};
    report.p_conform_given_y = process_conformance_prob(prior, n, y, x_c);
    if (y <= c) {
        report.specific_consumer_risk = 1.0 - report.p_conform_given_y;
    } else {
        report.specific_producer_risk = report.p_conform_given_y;
    }
    const GlobalRisks global = process_global_risks(prior, n, c, x_c);
    report.global_consumer_risk = global.consumer;
    report.global_producer_risk = global.producer;
    report.accept_prob = betabin_cdf(BetaBinomial(n, prior), c);
    report.prior_conform_prob = beta_cdf(prior, x_c);
    report.identity_residual = report.global_consumer_risk -
                               report.accept_prob + report.prior_conform_prob -
                               report.global_producer_risk;
    return report;
}

inline ConformityReport assess_lot(const BetaParams& prior, long N, long n,
                                   long y, long c, long x_c) {
    detail::check_plan(n, c);
    detail::check_sample(n, y);
    if (n > N) throw std::domain_error("assess_lot: require n <= N");
    ConformityReport report{};
    report.p_conform_given_y = lot_conformance_prob(prior, N, n, y, x_c);
    if (y <= c) {
        report.specific_consumer_risk = 1.0 - report.p_conform_given_y;
    } else {
        report.specific_producer_risk = report.p_conform_given_y;
    }
    const GlobalRisks global = lot_global_risks(prior, N, n, c, x_c);
    report.global_consumer_risk = global.consumer;
    report.global_producer_risk = global.producer;
    report.accept_prob = betabin_cdf(BetaBinomial(n, prior), c);
    report.prior_conform_prob = betabin_cdf(BetaBinomial(N, prior), x_c);
    report.identity_residual = report.global_consumer_risk -
                               report.accept_prob + report.prior_conform_prob -
                               report.global_producer_risk;
    return report;
}

} // namespace qconform

#endif // QCONFORM_CONFORMITY_HPP
