#ifndef QCONFORM_PLANS_HPP
#define QCONFORM_PLANS_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

// Embedded ISO 2859-1 single sampling plans (normal inspection, general
// inspection level II, lot size 1200) indexed by AQL, and the floor rule
// mapping an AQL to the upper tolerance limit on the lot count.

namespace qconform {

/// Acceptance quality limit stored as an exact decimal in thousandths of a
/// percent, so that floor products like 0.15% of 1200 never pick up binary
/// rounding artifacts.
struct Aql {
    long thousandths_percent;

    static Aql from_percent(double percent) {
        if (!(percent > 0.0)) {
            throw std::domain_error("Aql: percentage must be > 0");
        }
        const double scaled = percent * 1000.0;
        const long rounded = static_cast<long>(std::llround(scaled));
        if (std::fabs(scaled - static_cast<double>(rounded)) > 1e-6) {
            throw std::domain_error(
                "Aql: percentage must be a multiple of 0.001");
        }
        return Aql{rounded};
    }

    double percent() const {
        return static_cast<double>(thousandths_percent) / 1000.0;
    }

    double fraction() const {
        return static_cast<double>(thousandths_percent) / 100000.0;
    }

    bool operator==(const Aql&) const = default;
};

/// Single sampling plan (n, c) with its AQL index.
struct SamplingPlan {
    int index;    // 1-based row index
    Aql aql;
    long n;       // sample size
    long c;       // acceptance number
};

/// The only lot size covered by the embedded table.
inline constexpr long supported_lot_size = 1200;

/// The 19 single sampling plans for lot size 1200, normal inspection,
/// general inspection level II.
inline const std::array<SamplingPlan, 19>& plan_table() {
    static const std::array<SamplingPlan, 19> table = {{
        {1, Aql{10}, 1200, 0},
        {2, Aql{15}, 800, 0},
        {3, Aql{25}, 500, 0},
        {4, Aql{40}, 315, 0},
        {5, Aql{65}, 200, 0},
        {6, Aql{100}, 125, 0},
        {7, Aql{150}, 80, 0},
        {8, Aql{250}, 50, 0},
        {9, Aql{400}, 125, 1},
        {10, Aql{650}, 80, 1},
        {11, Aql{1000}, 80, 2},
        {12, Aql{1500}, 80, 3},
        {13, Aql{2500}, 80, 5},
        {14, Aql{4000}, 80, 7},
        {15, Aql{6500}, 80, 10},
        {16, Aql{10000}, 80, 14},
        {17, Aql{15000}, 80, 21},
        {18, Aql{25000}, 50, 21},
        {19, Aql{40000}, 32, 21},
    }};
    return table;
}

/// Upper tolerance limit x_C = floor(AQL/100 * N), in exact integer
/// arithmetic.
inline long tolerance_limit(Aql aql, long lot_size) {
    if (aql.thousandths_percent <= 0) {
        throw std::domain_error("tolerance_limit: AQL must be > 0");
    }
    if (lot_size < 1) {
        throw std::domain_error("tolerance_limit: lot size must be >= 1");
    }
    return aql.thousandths_percent * lot_size / 100000;
}

inline const SamplingPlan& plan_by_index(int index) {
    if (index < 1 || index > 19) {
        throw std::domain_error("plan_by_index: index must be in 1..19");
    }
    return plan_table()[static_cast<std::size_t>(index - 1)];
}

inline const SamplingPlan& plan_by_aql(Aql aql) {
    for (const auto& plan : plan_table()) {
        if (plan.aql == aql) return plan;
    }
    throw std::domain_error("plan_by_aql: AQL " + std::to_string(aql.percent()) +
                            "% is not a table entry");
}

} // namespace qconform

#endif // QCONFORM_PLANS_HPP
