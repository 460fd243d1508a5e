#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "qconform/conformity.hpp"
#include "qconform/plans.hpp"
#include "qconform/prior.hpp"
#include "oracles.hpp"

using namespace qconform;

TEST_CASE("process conformance probability") {
    CHECK(process_conformance_prob(BetaParams(1, 1), 0, 0, 0.25) ==
          Catch::Approx(0.25));
    CHECK(process_conformance_prob(BetaParams(0.57, 37.67), 10, 0, 1.0) == 1.0);
    // Posterior BETA(1, 316) has closed-form CDF 1 - (1-x)^316.
    CHECK(process_conformance_prob(BetaParams(1, 1), 315, 0, 0.0004) ==
          Catch::Approx(1.0 - std::pow(0.9996, 316)).epsilon(1e-12));
    CHECK_THROWS_AS(process_conformance_prob(BetaParams(1, 1), 5, 6, 0.2),
                    std::domain_error);
    CHECK_THROWS_AS(process_conformance_prob(BetaParams(1, 1), 5, 2, 1.2),
                    std::domain_error);
}

TEST_CASE("process specific risks by branch") {
    const auto consumer = process_specific_risk(BetaParams(1, 1), 0, 0, 0, 0.25);
    CHECK(consumer.side == RiskSide::consumer);
    CHECK(consumer.value == Catch::Approx(0.75));

    const auto producer = process_specific_risk(BetaParams(2, 9), 10, 3, 2, 1.0);
    CHECK(producer.side == RiskSide::producer);
    CHECK(producer.value == 1.0);

    // Complement holds exactly: same computation path.
    for (long y = 0; y <= 2; ++y) {
        const double p = process_conformance_prob(BetaParams(0.57, 37.67), 315,
                                                  y, 0.0004);
        const auto risk =
            process_specific_risk(BetaParams(0.57, 37.67), 315, y, 2, 0.0004);
        CHECK(risk.value + p == 1.0);
    }

    // Sparse-prior consumer risk cross-checked by quadrature of the
    // posterior density.
    const double p_conform =
        process_conformance_prob(BetaParams(0.57, 37.67), 315, 0, 0.0004);
    CHECK(p_conform ==
          Catch::Approx(test_oracle::beta_cdf(0.57, 352.67, 0.0004)).margin(1e-9));
}

TEST_CASE("process global risks") {
    const auto clean = process_global_risks(BetaParams(1, 1), 1, 1, 1.0);
    CHECK(clean.consumer == 0.0);
    CHECK(clean.producer == 0.0);

    // Hand sum for uniform prior, n=2, c=0, x_C=0.5:
    // Y ~ uniform on {0,1,2}; posteriors BETA(1,3), BETA(2,2), BETA(3,1).
    const auto risks = process_global_risks(BetaParams(1, 1), 2, 0, 0.5);
    const double f_13 = 1.0 - std::pow(0.5, 3);   // F_BETA(1,3)(0.5)
    const double f_22 = 0.5;                      // symmetry
    const double f_31 = std::pow(0.5, 3);         // F_BETA(3,1)(0.5)
    CHECK(risks.consumer == Catch::Approx((1.0 - f_13) / 3.0).epsilon(1e-12));
    CHECK(risks.producer ==
          Catch::Approx((f_22 + f_31) / 3.0).epsilon(1e-12));
}

TEST_CASE("process global risk identity") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> shape(0.2, 80.0);
    std::uniform_int_distribution<long> n_dist(1, 400);
    std::uniform_real_distribution<double> xc_dist(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const BetaParams prior(shape(rng), shape(rng));
        const long n = n_dist(rng);
        const long c = std::uniform_int_distribution<long>(0, n)(rng);
        const double x_c = xc_dist(rng);
        const auto risks = process_global_risks(prior, n, c, x_c);
        const double accept = betabin_cdf(BetaBinomial(n, prior), c);
        const double conform = beta_cdf(prior, x_c);
        CHECK(std::fabs(risks.consumer - accept + conform - risks.producer) <=
              1e-10);
    }
}

TEST_CASE("lot conformance probability") {
    CHECK(lot_conformance_prob(BetaParams(1, 1), 10, 10, 0, 0) == 1.0);
    // y > x_C: the sample alone violates the tolerance.
    CHECK(lot_conformance_prob(BetaParams(2, 5), 20, 10, 3, 2) == 0.0);
    // x_C - y >= N - n: conformity is certain.
    CHECK(lot_conformance_prob(BetaParams(2, 5), 20, 15, 1, 6) == 1.0);

    // Direct PMF enumeration of P(X - Y <= 1) under BETA-Bi(6, 1, 5).
    const BetaBinomial rem = posterior_lot_remainder(BetaParams(1, 1), 10, 4, 0);
    const double expected = betabin_pmf(rem, 0) + betabin_pmf(rem, 1);
    CHECK(lot_conformance_prob(BetaParams(1, 1), 10, 4, 0, 1) ==
          Catch::Approx(expected).epsilon(1e-14));

    CHECK_THROWS_AS(lot_conformance_prob(BetaParams(1, 1), 10, 11, 0, 1),
                    std::domain_error);
    CHECK_THROWS_AS(lot_conformance_prob(BetaParams(1, 1), 10, 4, 5, 1),
                    std::domain_error);
    CHECK_THROWS_AS(lot_conformance_prob(BetaParams(1, 1), 10, 4, 0, 11),
                    std::domain_error);
}

TEST_CASE("lot specific risks") {
    // Two-point remainder BETA-Bi(1,1,2): f(1) = B(2,2)/B(1,2) = 1/3.
    const auto consumer = lot_specific_risk(BetaParams(1, 1), 2, 1, 0, 0, 0);
    CHECK(consumer.side == RiskSide::consumer);
    CHECK(consumer.value == Catch::Approx(1.0 / 3.0).epsilon(1e-13));

    const auto producer = lot_specific_risk(BetaParams(2, 7), 50, 10, 3, 2, 50);
    CHECK(producer.side == RiskSide::producer);
    CHECK(producer.value == 1.0);

    // Sparse prior at full production scale: tail sum of BETA-Bi(885, 0.57, 352.67).
    const auto full_scale =
        lot_specific_risk(BetaParams(0.57, 37.67), 1200, 315, 0, 0, 0);
    const BetaBinomial rem =
        posterior_lot_remainder(BetaParams(0.57, 37.67), 1200, 315, 0);
    CHECK(full_scale.side == RiskSide::consumer);
    CHECK(full_scale.value ==
          Catch::Approx(1.0 - betabin_pmf(rem, 0)).epsilon(1e-12));
}

TEST_CASE("lot global risks") {
    const auto census = lot_global_risks(BetaParams(1, 1), 10, 10, 3, 3);
    CHECK(census.consumer == 0.0);
    CHECK(census.producer == 0.0);

    // Full enumeration of the 3x3 bivariate grid for N=4, n=2, c=0, x_C=1.
    const BivariateBetaBinomial joint(2, 2, BetaParams(1, 1));
    double r_con = 0.0, r_pro = 0.0;
    for (long y = 0; y <= 2; ++y) {
        for (long rem = 0; rem <= 2; ++rem) {
            const double f = bibetabin_pmf(joint, y, rem);
            if (y <= 0 && y + rem > 1) r_con += f;
            if (y > 0 && y + rem <= 1) r_pro += f;
        }
    }
    const auto risks = lot_global_risks(BetaParams(1, 1), 4, 2, 0, 1);
    CHECK(risks.consumer == Catch::Approx(r_con).margin(1e-12));
    CHECK(risks.producer == Catch::Approx(r_pro).margin(1e-12));
}

TEST_CASE("lot global risk identity") {
    for (const auto& plan : plan_table()) {
        for (const auto& preset : preset_table()) {
            const BetaParams prior(preset.a, preset.b);
            const long x_c = tolerance_limit(plan.aql, 1200);
            const auto risks =
                lot_global_risks(prior, 1200, plan.n, plan.c, x_c);
            const double accept = betabin_cdf(BetaBinomial(plan.n, prior), plan.c);
            const double conform = betabin_cdf(BetaBinomial(1200, prior), x_c);
            CHECK(std::fabs(risks.consumer - accept + conform -
                            risks.producer) <= 1e-10);
        }
    }
}

TEST_CASE("conformance probability is nonincreasing in y") {
    for (const auto& prior : {BetaParams(1, 1), BetaParams(0.5, 3), BetaParams(2, 5)}) {
        const long n = 12, N = 30;
        double prev = 1.0;
        for (long y = 0; y <= n; ++y) {
            const double p = lot_conformance_prob(prior, N, n, y, 5);
            CHECK(p <= prev + 1e-12);
            prev = p;
        }
        prev = 1.0;
        for (long y = 0; y <= n; ++y) {
            const double p = process_conformance_prob(prior, n, y, 0.3);
            CHECK(p <= prev + 1e-12);
            prev = p;
        }
    }
}

TEST_CASE("iso specific risks") {
    CHECK(iso_specific_risks(50, 0, 0.0).accept_prob == 1.0);
    CHECK(iso_specific_risks(50, 0, 0.05).accept_prob ==
          Catch::Approx(std::pow(0.95, 50)).epsilon(1e-12));
    CHECK(iso_specific_risks(80, 1, 0.01).accept_prob ==
          Catch::Approx(std::pow(0.99, 80) +
                        80 * 0.01 * std::pow(0.99, 79)).epsilon(1e-12));
    CHECK(iso_specific_risks(80, 1, 0.01).reject_prob ==
          Catch::Approx(1.0 - std::pow(0.99, 80) -
                        80 * 0.01 * std::pow(0.99, 79)).epsilon(1e-10));
    CHECK_THROWS_AS(iso_specific_risks(10, 3, -0.1), std::domain_error);
    CHECK_THROWS_AS(iso_specific_risks(10, 11, 0.1), std::domain_error);
    CHECK_THROWS_AS(iso_specific_risks(10, 3, 0.1, IsoConditioning::lot),
                    std::logic_error);
}

TEST_CASE("iso accept probability is nonincreasing in p, continuous at ends") {
    for (long n : {10L, 80L, 1200L}) {
        for (long c : {0L, 2L, n}) {
            double prev = 1.0;
            for (int i = 0; i <= 100; ++i) {
                const double p = i / 100.0;
                const double accept = iso_specific_risks(n, c, p).accept_prob;
                CHECK(accept <= prev + 1e-12);
                prev = accept;
            }
            CHECK(iso_specific_risks(n, c, 1e-14).accept_prob ==
                  Catch::Approx(iso_specific_risks(n, c, 0.0).accept_prob)
                      .margin(1e-10));
            CHECK(iso_specific_risks(n, c, 1.0 - 1e-14).accept_prob ==
                  Catch::Approx(iso_specific_risks(n, c, 1.0).accept_prob)
                      .margin(1e-10));
        }
    }
}

TEST_CASE("assessment reports") {
    const auto census = assess_lot(BetaParams(1, 1), 10, 10, 2, 3, 3);
    CHECK(census.global_consumer_risk == 0.0);
    CHECK(census.global_producer_risk == 0.0);
    CHECK(census.specific_consumer_risk.has_value());
    CHECK_FALSE(census.specific_producer_risk.has_value());
    CHECK(std::fabs(census.identity_residual) <= 1e-10);

    const auto rejected = assess_lot(BetaParams(0.57, 37.67), 1200, 80, 3, 2, 12);
    CHECK(rejected.specific_producer_risk.has_value());
    CHECK_FALSE(rejected.specific_consumer_risk.has_value());
    CHECK(std::fabs(rejected.identity_residual) <= 1e-10);

    const auto process = assess_process(BetaParams(1, 1), 315, 0, 0, 0.0004);
    CHECK(process.specific_consumer_risk.has_value());
    CHECK(*process.specific_consumer_risk + process.p_conform_given_y == 1.0);
    CHECK(std::fabs(process.identity_residual) <= 1e-10);
}
