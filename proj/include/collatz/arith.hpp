#pragma once

// Exact arithmetic modulo 3^b and binomial helpers.
//
// 2 generates the unit group of Z/3^b, whose order is m = 2*3^(b-1). Small
// moduli keep the full power table and its inverse; large ones compute
// discrete logs digit by digit (parity, then base-3 digits).

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "collatz/errors.hpp"

namespace collatz {

using BigInt = boost::multiprecision::cpp_int;
/// Exact nonnegative count. Never rounded.
using BigCount = boost::multiprecision::cpp_int;

inline BigInt pow_big(unsigned base, std::uint64_t exp) {
    if (exp > std::numeric_limits<unsigned>::max())
        throw resource_cap_exceeded("exponent too large: " + std::to_string(exp));
    return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(exp));
}

__extension__ using uint128 = unsigned __int128;

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t mod) {
    return static_cast<std::uint64_t>(static_cast<uint128>(a) * b % mod);
}

/// (a + b) mod m for a, b < m; safe when m exceeds 2^63.
inline std::uint64_t addmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t mod) {
    return a >= mod - b ? a - (mod - b) : a + b;
}

inline std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
    std::uint64_t result = 1 % mod;
    base %= mod;
    while (exp) {
        if (exp & 1) result = mulmod_u64(result, base, mod);
        base = mulmod_u64(base, base, mod);
        exp >>= 1;
    }
    return result;
}

class Mod3Context {
public:
    static constexpr unsigned default_table_threshold = 13;
    static constexpr std::uint32_t no_log = std::numeric_limits<std::uint32_t>::max();

    explicit Mod3Context(unsigned b, unsigned table_threshold = default_table_threshold)
        : b_(b) {
        if (b == 0) throw invalid_argument("Mod3Context: b must be >= 1");
        modulus_ = pow_big(3, b);
        order_ = 2 * pow_big(3, b - 1);
        if (b <= 40) {
            modulus_u64_ = modulus_.convert_to<std::uint64_t>();
            order_u64_ = order_.convert_to<std::uint64_t>();
        }
        if (b < table_threshold) build_tables();
    }

    unsigned b() const noexcept { return b_; }
    const BigInt& modulus() const noexcept { return modulus_; }
    /// m = 2*3^(b-1), the multiplicative order of 2.
    const BigInt& order() const noexcept { return order_; }
    bool has_table() const noexcept { return !pow2_.empty(); }
    bool fits_u64() const noexcept { return modulus_u64_ != 0; }

    std::uint64_t modulus_u64() const {
        require_u64();
        return modulus_u64_;
    }
    std::uint64_t order_u64() const {
        require_u64();
        return order_u64_;
    }

    /// pow2[k] = 2^k mod 3^b for k in [0, m). Empty above the table threshold.
    std::span<const std::uint64_t> pow2_table() const noexcept { return pow2_; }

    std::uint64_t pow2_u64(std::uint64_t k) const {
        if (has_table()) return pow2_[k % order_u64_];
        require_u64();
        return powmod_u64(2, k % order_u64_, modulus_u64_);
    }

    BigInt pow2(const BigInt& k) const {
        BigInt e = k % order_;
        if (e < 0) e += order_;
        BigInt r = boost::multiprecision::powm(BigInt(2), e, modulus_);
        return r;
    }

    /// Table lookup; only valid in table mode.
    std::uint64_t dlog_u64(std::uint64_t y) const {
        std::uint64_t r = y % modulus_u64_;
        std::uint32_t k = dlog_[r];
        if (k == no_log)
            throw not_a_power_residue("dlog2: " + std::to_string(y) + " is divisible by 3");
        return k;
    }

    BigInt dlog(const BigInt& y) const {
        BigInt r = y % modulus_;
        if (r < 0) r += modulus_;
        if (r % 3 == 0)
            throw not_a_power_residue("dlog2: " + r.str() + " is divisible by 3");
        if (has_table()) return BigInt(dlog_[r.convert_to<std::uint64_t>()]);
        return dlog_lifted(r);
    }

private:
    void require_u64() const {
        if (!fits_u64())
            throw resource_cap_exceeded("Mod3Context: modulus 3^" + std::to_string(b_) +
                                        " exceeds 64-bit fast path");
    }

    void build_tables() {
        pow2_.resize(order_u64_);
        dlog_.assign(modulus_u64_, no_log);
        std::uint64_t p = 1;
        for (std::uint64_t k = 0; k < order_u64_; ++k) {
            pow2_[k] = p;
            dlog_[p] = static_cast<std::uint32_t>(k);
            p = (p * 2) % modulus_u64_;
        }
    }

    // Pohlig-Hellman over the order 2*3^(b-1): the parity bit comes from the
    // residue mod 3, the 3-adic part from 4 = 2^2 generating the 3-Sylow subgroup.
    BigInt dlog_lifted(const BigInt& y) const {
        using boost::multiprecision::powm;
        const unsigned parity = (y % 3 == 1) ? 0 : 1;
        if (b_ == 1) return BigInt(parity);

        const BigInt sylow_order = pow_big(3, b_ - 1);
        const BigInt y3 = (y * y) % modulus_;
        const BigInt four_inv(powm(BigInt(2), BigInt(order_ - 2), modulus_));
        const BigInt gamma(powm(BigInt(4), pow_big(3, b_ - 2), modulus_));
        const BigInt gamma2 = (gamma * gamma) % modulus_;

        BigInt k3 = 0;
        BigInt digit_weight = 1;
        for (unsigned j = 0; j + 1 < b_; ++j) {
            const BigInt undo(powm(four_inv, k3, modulus_));
            const BigInt stripped = (y3 * undo) % modulus_;
            const BigInt h(powm(stripped, pow_big(3, b_ - 2 - j), modulus_));
            unsigned d;
            if (h == 1)
                d = 0;
            else if (h == gamma)
                d = 1;
            else if (h == gamma2)
                d = 2;
            else
                throw invariant_violation("dlog2: 3-adic digit lift failed");
            k3 += d * digit_weight;
            digit_weight *= 3;
        }
        // CRT with the parity bit; 3^(b-1) is odd so adding it flips parity.
        if (static_cast<unsigned>(k3 % 2) != parity) k3 += sylow_order;
        return k3;
    }

    unsigned b_;
    BigInt modulus_;
    BigInt order_;
    std::uint64_t modulus_u64_ = 0;
    std::uint64_t order_u64_ = 0;
    std::vector<std::uint64_t> pow2_;
    std::vector<std::uint32_t> dlog_;
};

inline Mod3Context build_context(unsigned b,
                                 unsigned table_threshold = Mod3Context::default_table_threshold) {
    return Mod3Context(b, table_threshold);
}

/// k in [0, m) with 2^k = y (mod 3^b).
inline BigInt dlog2(const BigInt& y, const Mod3Context& ctx) { return ctx.dlog(y); }

/// Generalized binomial coefficient r(r-1)...(r-k+1)/k! for real r.
inline double real_binomial(double r, std::uint64_t k) {
    double result = 1.0;
    for (std::uint64_t i = 0; i < k; ++i)
        result = result * (r - static_cast<double>(i)) / static_cast<double>(i + 1);
    return result;
}

/// binom(r, k) * z^k, z > 0, accumulated as a sum of logs so the large
/// intermediate values of long products never overflow.
inline double real_binomial_scaled(double r, std::uint64_t k, double z) {
    double log_mag = 0.0;
    bool negative = false;
    const double log_z = std::log(z);
    for (std::uint64_t i = 0; i < k; ++i) {
        double f = r - static_cast<double>(i);
        if (f == 0.0) return 0.0;
        if (f < 0.0) {
            negative = !negative;
            f = -f;
        }
        log_mag += std::log(f / static_cast<double>(i + 1)) + log_z;
    }
    double mag = std::exp(log_mag);
    return negative ? -mag : mag;
}

/// Exact binomial; zero when k > n.
inline BigCount big_binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigCount result = 1;
    for (std::uint64_t i = 0; i < k; ++i) {
        result *= (n - i);
        result /= (i + 1);
    }
    return result;
}

/// Binomial with a possibly negative top index, zero whenever top < k.
inline BigCount big_binomial_signed(std::int64_t n, std::int64_t k) {
    if (k < 0 || n < k) return 0;
    return big_binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k));
}

} // namespace collatz
