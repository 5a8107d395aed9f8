#pragma once

// Forward Collatz/Syracuse dynamics and the inverse map on odd integers.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "collatz/arith.hpp"

namespace collatz {

namespace detail {

inline unsigned trailing_zeros(std::uint64_t x) { return static_cast<unsigned>(std::countr_zero(x)); }
inline unsigned trailing_zeros(const BigInt& x) {
    return static_cast<unsigned>(boost::multiprecision::lsb(x));
}
inline bool is_odd(std::uint64_t x) { return x & 1u; }
inline bool is_odd(const BigInt& x) { return boost::multiprecision::bit_test(x, 0); }

inline std::string to_string(std::uint64_t x) { return std::to_string(x); }
inline std::string to_string(const BigInt& x) { return x.str(); }

} // namespace detail

/// One step of T: 3n+1 for odd n, n/2 for even n.
template <class Int>
Int collatz_step(const Int& n) {
    if (n < 1) throw invalid_argument("collatz_step: n must be positive");
    if (detail::is_odd(n)) return 3 * n + 1;
    return n / 2;
}

template <class Int>
struct SyracuseStep {
    Int next;
    unsigned divisions;
};

/// f(n) = (3n+1)/2^j with j maximal; n odd.
template <class Int>
SyracuseStep<Int> syracuse(const Int& n) {
    if (n < 1 || !detail::is_odd(n))
        throw invalid_argument("syracuse: expected an odd positive integer, got " +
                               detail::to_string(n));
    Int t = 3 * n + 1;
    unsigned j = detail::trailing_zeros(t);
    t >>= j;
    return {t, j};
}

struct TrajectoryStep {
    BigInt value;         // odd value reached by this application of f
    unsigned divisions;   // j of this application
};

struct Trajectory {
    BigInt n;
    std::vector<TrajectoryStep> steps;
    std::uint64_t b = 0;   // number of applications of f
    std::uint64_t a = 0;   // total divisions by 2
    /// v[i] = divisions at application b-i (the per-step sequence reversed).
    std::vector<std::uint64_t> v;
};

/// Forward orbit of an odd n down to 1. Throws step_budget_exceeded rather than
/// returning a truncated orbit.
inline Trajectory trajectory(const BigInt& n, std::uint64_t max_steps = 1'000'000) {
    if (n < 1 || !detail::is_odd(n))
        throw invalid_argument("trajectory: expected an odd positive integer, got " + n.str());
    Trajectory t;
    t.n = n;
    BigInt cur = n;
    while (cur != 1) {
        if (t.steps.size() >= max_steps)
            throw step_budget_exceeded("trajectory: " + n.str() + " did not reach 1 within " +
                                       std::to_string(max_steps) + " steps");
        auto [next, j] = syracuse(cur);
        t.steps.push_back({next, j});
        t.a += j;
        cur = std::move(next);
    }
    t.b = t.steps.size();
    t.v.reserve(t.steps.size());
    for (auto it = t.steps.rbegin(); it != t.steps.rend(); ++it) t.v.push_back(it->divisions);
    return t;
}

/// Number of Syracuse applications from odd n to 1, without recording the orbit.
/// Returns nullopt if an intermediate value would overflow 64 bits.
inline std::optional<std::uint64_t> syracuse_steps_u64(std::uint64_t n, std::uint64_t max_steps) {
    constexpr std::uint64_t limit = (std::numeric_limits<std::uint64_t>::max() - 1) / 3;
    std::uint64_t b = 0;
    while (n != 1) {
        if (b >= max_steps)
            throw step_budget_exceeded("trajectory: " + std::to_string(n) +
                                       " did not reach 1 within budget");
        if (n > limit) return std::nullopt;
        n = 3 * n + 1;
        n >>= std::countr_zero(n);
        ++b;
    }
    return b;
}

/// Same count for any odd n; falls back to arbitrary precision on overflow.
inline std::uint64_t syracuse_steps(std::uint64_t n, std::uint64_t max_steps = 1'000'000) {
    if (auto b = syracuse_steps_u64(n, max_steps)) return *b;
    return trajectory(BigInt(n), max_steps).b;
}

/// Children (n*2^k - 1)/3 <= cutoff of odd n, ascending in k. The self-loop
/// 1 -> 1 (k = 2) is left out.
inline std::vector<BigInt> inverse_children(const BigInt& n, const BigInt& cutoff) {
    if (n < 1 || !detail::is_odd(n))
        throw invalid_argument("inverse_children: expected an odd positive integer, got " +
                               n.str());
    std::vector<BigInt> out;
    const unsigned r = static_cast<unsigned>(n % 3);
    if (r == 0) return out;
    unsigned k = (r == 1) ? 2 : 1;
    if (n == 1) k = 4;
    BigInt shifted = n << k;
    for (;;) {
        BigInt child = (shifted - 1) / 3;
        if (child > cutoff) break;
        out.push_back(std::move(child));
        shifted <<= 2;
    }
    return out;
}

/// Odd integers of the inverse tree rooted at 1, level by level (index d-1 holds
/// depth d), restricted to values <= cutoff.
///
/// A descendant can be smaller than its ancestor, so nodes above the cutoff are
/// kept while they can still lead to an in-range node: the parent of c is at most
/// (3c+1)/2, which bounds every ancestor of an in-range node at depth <= max_depth.
inline std::vector<std::vector<BigInt>> inverse_tree_levels(unsigned max_depth,
                                                             const BigInt& cutoff) {
    if (max_depth == 0) throw invalid_argument("inverse_tree_count: max_depth must be >= 1");
    // bound[d]: largest value a depth-d node may take and still matter.
    std::vector<BigInt> bound(max_depth + 1);
    bound[max_depth] = cutoff;
    for (unsigned d = max_depth; d-- > 0;) bound[d] = (3 * bound[d + 1] + 1) / 2;

    std::vector<std::vector<BigInt>> levels(max_depth);
    std::vector<BigInt> frontier{BigInt(1)};
    for (unsigned d = 1; d <= max_depth; ++d) {
        std::vector<BigInt> next;
        for (const auto& node : frontier) {
            auto kids = inverse_children(node, bound[d]);
            for (auto& c : kids) next.push_back(std::move(c));
        }
        for (const auto& c : next)
            if (c <= cutoff) levels[d - 1].push_back(c);
        frontier = std::move(next);
    }
    return levels;
}

/// count[d-1] = number of odd n <= cutoff whose orbit reaches 1 in exactly d
/// Syracuse steps.
inline std::vector<std::uint64_t> inverse_tree_count(unsigned max_depth, const BigInt& cutoff) {
    auto levels = inverse_tree_levels(max_depth, cutoff);
    std::vector<std::uint64_t> counts;
    counts.reserve(levels.size());
    for (const auto& lvl : levels) counts.push_back(lvl.size());
    return counts;
}

} // namespace collatz
