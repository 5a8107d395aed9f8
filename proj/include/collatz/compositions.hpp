#pragma once

// Counting compositions of a into b parts, each part in [1, m].
//
// Only the [1, m] part range exists here; the more common [0, m] convention is
// intentionally absent.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "collatz/arith.hpp"

namespace collatz {

/// Dense exact histogram over a in [a_min, a_max].
struct CountTable {
    std::uint64_t b = 0;
    std::uint64_t m = 0;
    std::uint64_t a_min = 0;
    std::vector<BigCount> counts;

    std::uint64_t a_max() const noexcept { return a_min + counts.size() - 1; }

    BigCount at(std::uint64_t a) const {
        if (counts.empty() || a < a_min || a > a_max()) return 0;
        return counts[a - a_min];
    }

    BigCount total() const {
        BigCount s = 0;
        for (const auto& c : counts) s += c;
        return s;
    }
};

/// CountTable whose first part was drawn from an integer weight vector instead of
/// the all-ones row. Readouts are counts[a] / scale.
struct WeightedTable : CountTable {
    BigCount scale = 1;
};

struct ExactRatio {
    BigCount numerator;
    BigCount denominator;

    double value() const {
        return numerator.convert_to<double>() / denominator.convert_to<double>();
    }
};

inline constexpr std::uint64_t default_table_cap = 50'000'000;

namespace detail {

// One convolution with the all-ones row on [1, m]: row[a] -> sum_{i=1..m} row[a-i].
inline void convolve_uniform(std::vector<BigCount>& row, std::uint64_t& lo, std::uint64_t m) {
    const std::size_t len = row.size();
    std::vector<BigCount> prefix(len + 1);
    for (std::size_t i = 0; i < len; ++i) prefix[i + 1] = prefix[i] + row[i];
    std::vector<BigCount> next(len + m - 1);
    for (std::size_t idx = 0; idx < next.size(); ++idx) {
        std::size_t hi = std::min(idx + 1, len);
        std::size_t from = idx + 1 >= m ? idx + 1 - m : 0;
        next[idx] = prefix[hi] - prefix[from];
    }
    row = std::move(next);
    lo += 1;
}

inline void check_cap(std::uint64_t b, std::uint64_t m, std::uint64_t cap) {
    if (m != 0 && b > cap / m)
        throw resource_cap_exceeded("composition table of size m*b = " + std::to_string(m) + "*" +
                                    std::to_string(b) + " exceeds cap " + std::to_string(cap));
}

} // namespace detail

/// counts[a] = number of compositions of a into b parts in [1, m].
inline CountTable extended_binomial_table(std::uint64_t b, std::uint64_t m,
                                          std::uint64_t cap = default_table_cap) {
    if (b == 0 || m == 0) throw invalid_argument("extended_binomial_table: b, m must be >= 1");
    detail::check_cap(b, m, cap);
    CountTable t;
    t.b = b;
    t.m = m;
    t.a_min = 1;
    t.counts.assign(m, 1);
    for (std::uint64_t k = 1; k < b; ++k) detail::convolve_uniform(t.counts, t.a_min, m);
    return t;
}

inline bool c1_holds(std::uint64_t b, std::uint64_t a, std::uint64_t m) { return a + 1 <= m + b; }

/// binom(a-1, b-1), valid under C1.
inline BigCount closed_form_count(std::uint64_t b, std::uint64_t a, std::uint64_t m) {
    if (b == 0) throw invalid_argument("closed_form_count: b must be >= 1");
    if (!c1_holds(b, a, m))
        throw c1_violated("closed_form_count: a=" + std::to_string(a) + " > m+b-1");
    if (a < b) return 0;
    return big_binomial(a - 1, b - 1);
}

/// sum_{j=b..a} <b over j>_m = binom(a, b), valid under C1.
inline BigCount cumulative_closed_form(std::uint64_t b, std::uint64_t a, std::uint64_t m) {
    if (b == 0) throw invalid_argument("cumulative_closed_form: b must be >= 1");
    if (!c1_holds(b, a, m))
        throw c1_violated("cumulative_closed_form: a=" + std::to_string(a) + " > m+b-1");
    return big_binomial(a, b);
}

/// m = 2*3^(b-1) as a 64-bit value.
inline std::uint64_t order_of_two(std::uint64_t b) {
    if (b == 0 || b > 40) throw invalid_argument("order_of_two: b must be in [1, 40]");
    std::uint64_t m = 2;
    for (std::uint64_t i = 1; i < b; ++i) m *= 3;
    return m;
}

/// V: even v in [4, m+2] with v not divisible by 3. Ascending.
inline std::vector<std::uint64_t> admissible_v1_set(std::uint64_t m) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t v = 4; v <= m + 2; v += 2)
        if (v % 3 != 0) out.push_back(v);
    return out;
}

/// Numerators of C(a, b, m) = (3 / m) * sum_{v in V} <b-1 over a-v>_m, scale m.
/// Sums to m^{b-1} after scaling.
inline WeightedTable modified_table(std::uint64_t b, std::uint64_t cap = default_table_cap) {
    if (b < 2) throw invalid_argument("modified_table: b must be >= 2");
    const std::uint64_t m = order_of_two(b);
    detail::check_cap(b, m, cap);
    WeightedTable t;
    t.b = b;
    t.m = m;
    t.scale = m;
    t.a_min = 4;
    t.counts.assign(m - 1, 0);   // positions 4 .. m+2
    for (auto v : admissible_v1_set(m)) t.counts[v - 4] = 3;
    for (std::uint64_t k = 1; k < b; ++k) detail::convolve_uniform(t.counts, t.a_min, m);
    return t;
}

inline ExactRatio modified_coefficient(const WeightedTable& table, std::uint64_t a) {
    return {table.at(a), table.scale};
}

inline ExactRatio modified_coefficient(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    if (b < 2) throw invalid_argument("modified_coefficient: b must be >= 2");
    if (m != order_of_two(b))
        throw invalid_argument("modified_coefficient: m must equal 2*3^(b-1)");
    return modified_coefficient(modified_table(b), a);
}

/// O_1(b, a) = C(a, b, m).
inline double o1(const WeightedTable& table, std::uint64_t a) {
    return modified_coefficient(table, a).value();
}

inline double o1(std::uint64_t b, std::uint64_t a) {
    return modified_coefficient(modified_table(b), a).value();
}

inline bool o2_in_domain(std::uint64_t b, std::uint64_t a) {
    return b >= 1 && a >= b && a + 1 <= order_of_two(b) + b;
}

/// O_2(b, a) = binom(a-5, b-1) / m on a in [b, m+b-1].
inline double o2(std::uint64_t b, std::uint64_t a) {
    if (!o2_in_domain(b, a))
        throw invalid_argument("o2: a=" + std::to_string(a) + " outside [b, m+b-1] for b=" +
                               std::to_string(b));
    const BigCount num = big_binomial_signed(static_cast<std::int64_t>(a) - 5,
                                             static_cast<std::int64_t>(b) - 1);
    return num.convert_to<double>() / static_cast<double>(order_of_two(b));
}

} // namespace collatz
