#ifndef QCONFORM_ORACLE_HPP
#define QCONFORM_ORACLE_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qconform/conformity.hpp"
#include "qconform/distributions.hpp"

// Independent verification layer: exact enumeration over the bivariate
// beta-binomial grid for small lots, and Monte Carlo simulation at full
// scale. Used by the test suites and the `verify` CLI subcommand.

namespace qconform {

/// SplitMix64: the pinned PRNG for all Monte Carlo runs. Algorithm from
/// Steele, Lea & Flood, "Fast splittable pseudorandom number generators"
/// (as published in the public-domain splitmix64 reference code). Chosen for
/// a fully documented, platform-independent stream.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in the open interval (0,1).
    double next_open01() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

  private:
    std::uint64_t state_;
};

struct McConfig {
    long trials;
    std::uint64_t seed;
};

struct McEstimate {
    double estimate;
    double std_error;
    long trials;
};

struct McRisks {
    McEstimate consumer;
    McEstimate producer;
};

struct BruteForceLotResult {
    double r_con;
    double r_pro;
    std::vector<double> p_conform_given_y;  // indexed by y = 0..n
};

/// Exhaustive summation over the (n+1) x (N-n+1) grid of the joint law of
/// (Y, X-Y), classifying each cell by conformity (y + remainder <= x_C) and
/// acceptance (y <= c). Exact up to rounding; restricted to N <= 20.
inline BruteForceLotResult brute_force_lot_risks(const BetaParams& prior,
                                                 long N, long n, long c,
                                                 long x_c) {
    if (N > 20) {
        throw std::domain_error("brute_force_lot_risks: enumeration bound is N <= 20");
    }
    detail::check_plan(n, c);
    if (n > N) throw std::domain_error("brute_force_lot_risks: require n <= N");
    detail::check_count_limit(x_c, N);

    const BivariateBetaBinomial joint(n, N - n, prior);
    BruteForceLotResult result{0.0, 0.0, std::vector<double>(n + 1, 0.0)};
    for (long y = 0; y <= n; ++y) {
        double mass = 0.0;
        double conform_mass = 0.0;
        for (long rem = 0; rem <= N - n; ++rem) {
            const double f = bibetabin_pmf(joint, y, rem);
            mass += f;
            const bool conforming = (y + rem <= x_c);
            if (conforming) conform_mass += f;
            if (y <= c && !conforming) result.r_con += f;
            if (y > c && conforming) result.r_pro += f;
        }
        result.p_conform_given_y[static_cast<std::size_t>(y)] =
            conform_mass / mass;
    }
    return result;
}

namespace detail {

inline long count_bernoulli(SplitMix64& rng, long n, double p) {
    long hits = 0;
    for (long i = 0; i < n; ++i) {
        if (rng.next_open01() < p) ++hits;
    }
    return hits;
}

inline McEstimate tally_to_estimate(long hits, long trials) {
    const double est = static_cast<double>(hits) / static_cast<double>(trials);
    return {est, std::sqrt(est * (1.0 - est) / static_cast<double>(trials)),
            trials};
}

} // namespace detail

/// Monte Carlo estimate of the lot global risks. Per trial: draw the process
/// proportion p by inverse-CDF from the prior, realize the N unit indicators
/// as Bernoulli(p) draws, take the first n as the sample. Deterministic for
/// a given seed.
inline McRisks mc_lot_risks(const BetaParams& prior, long N, long n, long c,
                            long x_c, const McConfig& cfg) {
    detail::check_plan(n, c);
    if (n > N) throw std::domain_error("mc_lot_risks: require n <= N");
    detail::check_count_limit(x_c, N);
    if (cfg.trials < 1) throw std::domain_error("mc_lot_risks: trials must be >= 1");

    SplitMix64 rng(cfg.seed);
    long con_hits = 0;
    long pro_hits = 0;
    for (long t = 0; t < cfg.trials; ++t) {
        const double p = beta_quantile(prior, rng.next_open01());
        const long y = detail::count_bernoulli(rng, n, p);
        const long x = y + detail::count_bernoulli(rng, N - n, p);
        if (x > x_c && y <= c) ++con_hits;
        if (x <= x_c && y > c) ++pro_hits;
    }
    return {detail::tally_to_estimate(con_hits, cfg.trials),
            detail::tally_to_estimate(pro_hits, cfg.trials)};
}

/// Monte Carlo estimate of the process global risks. Per trial: draw p from
/// the prior, Y as the Bernoulli count of an n-sample, classify by p <= x_C
/// and Y <= c.
inline McRisks mc_process_risks(const BetaParams& prior, long n, long c,
                                double x_c, const McConfig& cfg) {
    detail::check_plan(n, c);
    detail::check_proportion_limit(x_c);
    if (cfg.trials < 1) throw std::domain_error("mc_process_risks: trials must be >= 1");

    SplitMix64 rng(cfg.seed);
    long con_hits = 0;
    long pro_hits = 0;
    for (long t = 0; t < cfg.trials; ++t) {
        const double p = beta_quantile(prior, rng.next_open01());
        const long y = detail::count_bernoulli(rng, n, p);
        if (p > x_c && y <= c) ++con_hits;
        if (p <= x_c && y > c) ++pro_hits;
    }
    return {detail::tally_to_estimate(con_hits, cfg.trials),
            detail::tally_to_estimate(pro_hits, cfg.trials)};
}

} // namespace qconform

#endif // QCONFORM_ORACLE_HPP
