#pragma once

// Real-valued layer: a(x), the M2/M3 terms and their closed forms, the
// generalized binomial series sum_b 3^-b binom(b*t + r, b) with t = log2(3),
// and the distribution P(B=b) proportional to binom(a(x)-4, b) 3^-b.
//
// Everything here is binary64. Exact values live in the integer modules.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "collatz/arith.hpp"
#include "collatz/errors.hpp"

namespace collatz {

struct Constants {
    static constexpr double t = 1.5849625007211561814537389439478165;   // log2(3)
    static constexpr double c = 2.0 - t;
    static constexpr double z = 1.0 / 3.0;
    static constexpr double coefficient2 = (3.0 / 16.0) / c;
    static constexpr double coefficient3 = (9.0 / 64.0) / c;
};

/// a(x) = log2(x) + b*log2(3).
inline double a_of_x(double x, std::uint64_t b) {
    return std::log2(x) + static_cast<double>(b) * Constants::t;
}

/// (3/2) binom(a(x)-4, b) 3^-b; the b = 0 term is the integer 1 itself.
/// Terms whose upper index drops below b-1 are clamped to 0.
inline double m2_term(std::uint64_t b, double x) {
    if (b == 0) return 1.0;
    const double r = a_of_x(x, b) - 4.0;
    if (r < static_cast<double>(b) - 1.0) return 0.0;
    return 1.5 * real_binomial_scaled(r, b, Constants::z);
}

/// (3/2) binom(a(x)-6, b-1) 3^{-b+1}.
inline double m3_term(std::uint64_t b, double x) {
    if (b == 0) return 0.0;
    const double r = a_of_x(x, b) - 6.0;
    if (r < static_cast<double>(b) - 2.0) return 0.0;
    return 1.5 * real_binomial_scaled(r, b - 1, Constants::z);
}

inline bool m2_term_clamped(std::uint64_t b, double x) {
    return b > 0 && a_of_x(x, b) - 4.0 < static_cast<double>(b) - 1.0;
}

inline double m2_closed(double x) { return Constants::coefficient2 * x - 0.5; }
inline double m3_closed(double x) { return Constants::coefficient3 * x; }

/// E(B) = l/c + (5t-8)/c^2, l = log2(x).
inline double mean_closed_l(double l) {
    constexpr double t = Constants::t, c = Constants::c;
    return l / c + (5 * t - 8) / (c * c);
}

/// V(B) = (l(4-2t) + 2t^2 + 8t - 16) / c^4.
inline double var_closed_l(double l) {
    constexpr double t = Constants::t, c = Constants::c;
    return (l * (4 - 2 * t) + 2 * t * t + 8 * t - 16) / (c * c * c * c);
}

inline double mean_closed(double x) { return mean_closed_l(std::log2(x)); }
inline double var_closed(double x) { return var_closed_l(std::log2(x)); }

inline constexpr std::uint64_t series_b_cap = 1'000'000;
inline constexpr double default_series_tol = 1e-15;

namespace detail {

// Terms of the series with top index b*t + r. Terms grow, peak near the mean of B
// and then decay geometrically, so past mean + 12 sd the remaining tail is bounded
// by term * rho / (1 - rho) with rho the current term ratio.
template <class OnTerm>
std::uint64_t walk_series(double r, double tol, OnTerm&& on_term) {
    const double l_equiv = r + 4.0;
    const double start_check =
        mean_closed_l(l_equiv) + 12.0 * std::sqrt(std::max(var_closed_l(l_equiv), 0.0));
    double partial = 0.0;
    double prev = 0.0;
    for (std::uint64_t b = 0; b <= series_b_cap; ++b) {
        const double term = real_binomial_scaled(static_cast<double>(b) * Constants::t + r, b,
                                                 Constants::z);
        on_term(b, term);
        partial += term;
        if (static_cast<double>(b) > start_check && prev != 0.0) {
            const double rho = std::abs(term / prev);
            if (rho < 1.0) {
                const double tail = std::abs(term) * rho / (1.0 - rho);
                if (tail <= tol * std::abs(partial)) return b;
            }
        }
        prev = term;
    }
    throw non_convergence("series did not converge within " + std::to_string(series_b_cap) +
                          " terms");
}

} // namespace detail

/// sum_{b>=0} 3^-b binom(b*t + l + shift, b), which equals 2^{l+shift+1}/c.
/// Stops once the estimated remaining tail is below tol times the partial sum.
inline double series_sum(double l, double shift, double tol = default_series_tol) {
    if (!(tol > 0.0)) throw invalid_argument("series_sum: tol must be positive");
    // Pairwise accumulation keeps the result independent of evaluation order.
    std::vector<double> terms;
    detail::walk_series(l + shift, tol, [&](std::uint64_t, double term) { terms.push_back(term); });
    while (terms.size() > 1) {
        std::vector<double> next((terms.size() + 1) / 2);
        for (std::size_t i = 0; i < next.size(); ++i)
            next[i] = terms[2 * i] + (2 * i + 1 < terms.size() ? terms[2 * i + 1] : 0.0);
        terms = std::move(next);
    }
    return terms.empty() ? 0.0 : terms.front();
}

/// y - y^t / 3 - 1; zero at y = 2 and y = 4.
inline double bt_identity_residual(double y) {
    if (!(y > 0.0)) throw invalid_argument("bt_identity_residual: y must be positive");
    return y - std::pow(y, Constants::t) / 3.0 - 1.0;
}

/// ln(log2 x) + 1, the step count below which C1 fails.
inline double b_min_threshold(double x) {
    if (!(x > 2.0)) throw invalid_argument("b_min_threshold: x must exceed 2");
    return std::log(std::log2(x)) + 1.0;
}

struct BDistribution {
    double x = 0;
    std::vector<double> probs;   // probs[b] = P(B = b), b in [0, b_max]

    std::uint64_t b_max() const noexcept { return probs.empty() ? 0 : probs.size() - 1; }
};

inline constexpr double min_distribution_x = 1024.0;

/// P(B=b) = (8c/x) binom(a(x)-4, b) 3^-b. The support reaches at least
/// mean + 12 sd and continues until the geometric tail is below 1e-15.
inline BDistribution b_distribution(double x) {
    if (!(x >= min_distribution_x))
        throw invalid_argument("b_distribution: x must be >= 2^10");
    BDistribution d;
    d.x = x;
    const double l = std::log2(x);
    // 8c/x folded into the log-domain term: scale = 2^{-(l-3)} c
    const double scale = Constants::c * std::exp2(3.0 - l);
    detail::walk_series(l - 4.0, default_series_tol,
                        [&](std::uint64_t, double term) { d.probs.push_back(scale * term); });
    return d;
}

struct Moments {
    double total = 0;
    double mean = 0;
    double variance = 0;
    double skewness = 0;
    double excess_kurtosis = 0;
};

inline Moments moments(const BDistribution& d) {
    Moments mo;
    for (double p : d.probs) mo.total += p;
    for (std::size_t b = 0; b < d.probs.size(); ++b)
        mo.mean += static_cast<double>(b) * d.probs[b];
    mo.mean /= mo.total;
    double m2 = 0, m3 = 0, m4 = 0;
    for (std::size_t b = 0; b < d.probs.size(); ++b) {
        const double dev = static_cast<double>(b) - mo.mean;
        const double p = d.probs[b] / mo.total;
        m2 += dev * dev * p;
        m3 += dev * dev * dev * p;
        m4 += dev * dev * dev * dev * p;
    }
    mo.variance = m2;
    mo.skewness = m3 / std::pow(m2, 1.5);
    mo.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    return mo;
}

struct NormalityDiagnostic {
    double skewness = 0;
    double excess_kurtosis = 0;
};

inline NormalityDiagnostic normality_diagnostic(double x) {
    const Moments mo = moments(b_distribution(x));
    return {mo.skewness, mo.excess_kurtosis};
}

struct TruncatedBound {
    std::uint64_t b_lo = 0;
    std::uint64_t b_hi = 0;
    double value = 0;
    double ratio = 0;   // value / m2_closed(x)
};

/// Sum of m2_term over [E - 2 sd, E + 2 sd], window rounded outward.
inline TruncatedBound m2_truncated(double x) {
    if (!(x >= min_distribution_x))
        throw invalid_argument("m2_truncated: x must be >= 2^10");
    const double e = mean_closed(x);
    const double sd = std::sqrt(var_closed(x));
    TruncatedBound tb;
    tb.b_lo = static_cast<std::uint64_t>(std::max(0.0, std::floor(e - 2 * sd)));
    tb.b_hi = static_cast<std::uint64_t>(std::ceil(e + 2 * sd));
    for (std::uint64_t b = tb.b_lo; b <= tb.b_hi; ++b) tb.value += m2_term(b, x);
    tb.ratio = tb.value / m2_closed(x);
    return tb;
}

struct TermRow {
    std::uint64_t b;
    double m2;
    double m3;
};

struct BoundsReport {
    double x = 0;
    double log2_x = 0;
    double m2_closed = 0;
    double m3_closed = 0;
    double m2_series_plus_one = 0;   // 1 + sum_{b>=1} m2_term
    double m2_series_folded = 0;     // (3/2) sum_{b>=0} ... - 1/2
    double m3_series = 0;
    double sum_m2_b1_to_5 = 0;
    double b_min = 0;
    double mean_closed = 0;
    double var_closed = 0;
    std::uint64_t clamped_terms = 0;
    std::optional<Moments> numeric;          // needs x >= 2^10
    std::optional<TruncatedBound> truncated; // needs x >= 2^10
    std::vector<TermRow> terms;
};

inline BoundsReport bounds_report(double x) {
    if (!(x > 2.0)) throw invalid_argument("bounds: x must exceed 2");
    BoundsReport r;
    r.x = x;
    r.log2_x = std::log2(x);
    r.m2_closed = m2_closed(x);
    r.m3_closed = m3_closed(x);
    r.m2_series_folded = 1.5 * series_sum(r.log2_x, -4.0) - 0.5;
    r.m3_series = 1.5 * series_sum(r.log2_x, Constants::t - 6.0);
    r.b_min = b_min_threshold(x);
    r.mean_closed = mean_closed(x);
    r.var_closed = var_closed(x);

    const std::uint64_t last = std::max<std::uint64_t>(
        8, detail::walk_series(r.log2_x - 4.0, default_series_tol, [](std::uint64_t, double) {}));
    double total = 0;
    for (std::uint64_t b = 0; b <= last; ++b) {
        TermRow row{b, m2_term(b, x), m3_term(b, x)};
        if (m2_term_clamped(b, x)) ++r.clamped_terms;
        total += row.m2;
        if (b >= 1 && b <= 5) r.sum_m2_b1_to_5 += row.m2;
        r.terms.push_back(row);
    }
    r.m2_series_plus_one = total;
    if (x >= min_distribution_x) {
        r.numeric = moments(b_distribution(x));
        r.truncated = m2_truncated(x);
    }
    return r;
}

} // namespace collatz
