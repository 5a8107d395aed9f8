#pragma once

// Admissible tuples: the congruence test, integer reconstruction, conversions
// between the delta form (v_1..v_b) and the cumulative form (a = u_0 > ... > u_b = 0),
// and the unique-v_1 solver.

#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "collatz/arith.hpp"

namespace collatz {

struct VTuple {
    std::vector<std::uint64_t> v;

    std::size_t b() const noexcept { return v.size(); }
    std::uint64_t a() const noexcept { return std::accumulate(v.begin(), v.end(), std::uint64_t{0}); }
    friend bool operator==(const VTuple&, const VTuple&) = default;
};

struct UTuple {
    std::vector<std::uint64_t> u;   // u_0 = a, ..., u_b = 0

    std::size_t b() const noexcept { return u.empty() ? 0 : u.size() - 1; }
    friend bool operator==(const UTuple&, const UTuple&) = default;
};

inline void validate(const VTuple& t) {
    if (t.v.empty()) throw invalid_argument("VTuple: b must be >= 1");
    for (auto x : t.v)
        if (x == 0) throw invalid_argument("VTuple: entries must be >= 1");
}

inline UTuple v_to_u(const VTuple& t) {
    validate(t);
    UTuple out;
    out.u.resize(t.v.size() + 1, 0);
    for (std::size_t i = t.v.size(); i-- > 0;) out.u[i] = out.u[i + 1] + t.v[i];
    return out;
}

inline VTuple u_to_v(const UTuple& t) {
    if (t.u.size() < 2) throw invalid_argument("UTuple: b must be >= 1");
    if (t.u.back() != 0) throw invalid_argument("UTuple: last entry must be 0");
    VTuple out;
    out.v.reserve(t.u.size() - 1);
    for (std::size_t i = 1; i < t.u.size(); ++i) {
        if (t.u[i - 1] <= t.u[i]) throw invalid_argument("UTuple: entries must strictly decrease");
        out.v.push_back(t.u[i - 1] - t.u[i]);
    }
    return out;
}

namespace detail {

inline void check_context(std::size_t b, const Mod3Context& ctx) {
    if (ctx.b() != b)
        throw invalid_argument("context built for b=" + std::to_string(ctx.b()) +
                               " used with b=" + std::to_string(b));
}

} // namespace detail

/// 2^a == sum_{i<b} 2^{u_i} 3^{i-1} + 3^{b-1}  (mod 3^b)
inline bool is_admissible(const VTuple& t, const Mod3Context& ctx) {
    validate(t);
    detail::check_context(t.b(), ctx);
    const UTuple ut = v_to_u(t);
    const std::size_t b = t.b();
    if (ctx.fits_u64()) {
        const std::uint64_t mod = ctx.modulus_u64();
        std::uint64_t rhs = 0;
        std::uint64_t pow3 = 1;
        for (std::size_t i = 1; i < b; ++i) {
            rhs = addmod_u64(rhs, mulmod_u64(ctx.pow2_u64(ut.u[i]), pow3, mod), mod);
            pow3 *= 3;
        }
        rhs = addmod_u64(rhs, pow3 % mod, mod);
        return ctx.pow2_u64(ut.u[0]) == rhs;
    }
    const BigInt& mod = ctx.modulus();
    BigInt rhs = 0;
    BigInt pow3 = 1;
    for (std::size_t i = 1; i < b; ++i) {
        rhs = (rhs + ctx.pow2(BigInt(ut.u[i])) * pow3) % mod;
        pow3 *= 3;
    }
    rhs = (rhs + pow3) % mod;
    return ctx.pow2(BigInt(ut.u[0])) == rhs;
}

/// n = (2^a - sum_i 2^{u_i} 3^{i-1}) / 3^b, exact; throws not_admissible otherwise.
inline BigInt reconstruct_n(const VTuple& t) {
    const UTuple ut = v_to_u(t);
    const std::size_t b = t.b();
    BigInt numerator = BigInt(1) << ut.u[0];
    BigInt pow3 = 1;
    for (std::size_t i = 1; i <= b; ++i) {
        numerator -= (BigInt(1) << ut.u[i]) * pow3;
        pow3 *= 3;
    }
    // pow3 == 3^b here
    BigInt q, r;
    boost::multiprecision::divide_qr(numerator, pow3, q, r);
    if (r != 0 || q <= 0) throw not_admissible("reconstruct_n: tuple is not admissible");
    return q;
}

/// The unique v_1 in [4, m+2] making (v_1, tail) admissible, m = 2*3^(b-1).
inline std::uint64_t solve_v1(std::size_t b, std::span<const std::uint64_t> tail,
                              const Mod3Context& ctx) {
    if (b == 0) throw invalid_argument("solve_v1: b must be >= 1");
    if (tail.size() + 1 != b)
        throw invalid_argument("solve_v1: tail must have b-1 entries");
    for (auto x : tail)
        if (x == 0) throw invalid_argument("solve_v1: tail entries must be >= 1");
    detail::check_context(b, ctx);
    if (!ctx.fits_u64())
        throw resource_cap_exceeded("solve_v1: v_1 window exceeds 64 bits for b=" +
                                    std::to_string(b));

    const std::uint64_t mod = ctx.modulus_u64();
    const std::uint64_t m = ctx.order_u64();
    // 2^{v_1} == sum_{i=1..b} 3^{i-1} 2^{-s_i}, s_i = v_2 + ... + v_i
    std::uint64_t w = 1;
    std::uint64_t pow3 = 1;
    std::uint64_t s = 0;
    for (auto x : tail) {
        s = (s + x % m) % m;
        pow3 *= 3;
        w = addmod_u64(w, mulmod_u64(pow3, ctx.pow2_u64((m - s) % m), mod), mod);
    }
    const std::uint64_t k = ctx.has_table() ? ctx.dlog_u64(w)
                                            : ctx.dlog(BigInt(w)).convert_to<std::uint64_t>();
    const std::uint64_t v1 = 4 + (k % m + m - 4 % m) % m;
    if (v1 > m + 2)
        throw invariant_violation("solve_v1: solution " + std::to_string(v1) +
                                  " outside [4, m+2]");
    return v1;
}

} // namespace collatz
