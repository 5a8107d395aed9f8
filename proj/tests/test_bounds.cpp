#include <gtest/gtest.h>

#include <cmath>

#include "collatz/bounds.hpp"

using namespace collatz;

namespace {

constexpr double t = 1.5849625007211562;   // log2(3)

// Moments of P(B=b) from log-gamma, independent of the running products.
Moments oracle_moments(double l) {
    const double c = 2.0 - t;
    std::vector<long double> p;
    for (int b = 0;; ++b) {
        const long double r = l + b * t - 4.0;
        const long double lp = std::lgamma(r + 1) - std::lgamma(b + 1.0L) - std::lgamma(r - b + 1) -
                               b * std::log(3.0L) + std::log(8.0L * c) - l * std::log(2.0L);
        p.push_back(std::exp(lp));
        if (b > 50 && p.back() < 1e-30L * p[p.size() / 2]) break;
    }
    long double s = 0, m1 = 0;
    for (std::size_t b = 0; b < p.size(); ++b) s += p[b], m1 += b * p[b];
    m1 /= s;
    long double m2 = 0, m3 = 0, m4 = 0;
    for (std::size_t b = 0; b < p.size(); ++b) {
        const long double d = b - m1, q = p[b] / s;
        m2 += d * d * q;
        m3 += d * d * d * q;
        m4 += d * d * d * d * q;
    }
    return {static_cast<double>(s), static_cast<double>(m1), static_cast<double>(m2),
            static_cast<double>(m3 / std::pow(m2, 1.5L)), static_cast<double>(m4 / (m2 * m2) - 3)};
}

} // namespace

TEST(Constants, Values) {
    EXPECT_NEAR(Constants::coefficient2, 0.45177, 5e-6);
    EXPECT_NEAR(Constants::coefficient3, 0.3388, 5e-5);
    EXPECT_NEAR(1 / Constants::c, 2.409421, 1e-6);
    EXPECT_NEAR(2 / std::pow(Constants::c, 3), 27.9749, 1e-3);
    EXPECT_NEAR(mean_closed_l(0), -0.436487, 1e-6);
    EXPECT_NEAR(var_closed_l(0), 57.4246, 1e-3);
    EXPECT_NEAR(mean_closed_l(1) - mean_closed_l(0), 2.409421, 1e-6);
    EXPECT_NEAR(var_closed_l(1) - var_closed_l(0), 27.9749, 1e-3);
}

TEST(AOfX, Examples) {
    EXPECT_DOUBLE_EQ(a_of_x(8, 0), 3);
    EXPECT_NEAR(a_of_x(2e10, 0), 34.2193, 1e-4);
    EXPECT_NEAR(a_of_x(2, 1), 1 + t, 1e-15);
}

TEST(Terms, Examples) {
    double s = 0;
    for (std::uint64_t b = 1; b <= 5; ++b) s += m2_term(b, 2e10);
    EXPECT_NEAR(s, 4793, 1);
    EXPECT_EQ(m2_term(0, 2e10), 1.0);
    EXPECT_DOUBLE_EQ(m3_term(1, 1e6), 1.5);
    // (3/2) binom(a-4, 1)/3
    EXPECT_NEAR(m2_term(1, 1024), 0.5 * (10 + t - 4), 1e-12);
}

TEST(Terms, ClampBelowBottom) {
    // upper index a(x) - 4 < b - 1 only when log2 x is small
    for (std::uint64_t b = 1; b < 200; ++b) {
        EXPECT_FALSE(m2_term_clamped(b, 17.0));
        EXPECT_GE(m2_term(b, 17.0), 0.0);
    }
    EXPECT_TRUE(m2_term_clamped(3, 1.5));
    EXPECT_EQ(m2_term(3, 1.5), 0.0);
}

TEST(ClosedForms, Examples) {
    EXPECT_NEAR(m2_closed(2e10), 0.45177 * 2e10 - 0.5, 5e-6 * 2e10);
    EXPECT_NEAR(m3_closed(1), 0.33883, 1e-4);
    EXPECT_EQ(m2_closed(0), -0.5);
    for (double x = 9; x < 1e30; x *= 7.3) EXPECT_LT(m3_closed(x), m2_closed(x));
}

TEST(Series, Identity) {
    for (double l : {0.0, 5.0, 10.0, 20.0, 34.2193}) {
        const double expect = std::exp2(l + 1) / (2 - t);
        EXPECT_NEAR(series_sum(l, 0, 1e-9) / expect, 1.0, 1e-8) << l;
        EXPECT_NEAR(series_sum(l, 0) / expect, 1.0, 1e-12) << l;
    }
    EXPECT_NEAR(series_sum(0, 0), 4.818842, 1e-6);
    EXPECT_NEAR(series_sum(20, 0) / (2 * std::exp2(20) / (2 - t)), 1.0, 1e-9);
    std::vector<double> first;
    detail::walk_series(3.7, 1e-15, [&](std::uint64_t, double term) { first.push_back(term); });
    EXPECT_EQ(first.front(), 1.0);
    EXPECT_THROW(series_sum(1, 0, 0), invalid_argument);
}

TEST(Series, ClosedFormConsistency) {
    for (double l : {10.0, 20.0, 34.2193, 60.0}) {
        const double x = std::exp2(l);
        EXPECT_NEAR((1.5 * series_sum(l, -4) - 0.5) / m2_closed(x), 1.0, 1e-8);
        EXPECT_NEAR(1.5 * series_sum(l, t - 6) / m3_closed(x), 1.0, 1e-8);
    }
}

TEST(Series, BtResidual) {
    EXPECT_NEAR(bt_identity_residual(2), 0, 1e-12);
    EXPECT_NEAR(bt_identity_residual(4), 0, 1e-12);
    EXPECT_NEAR(bt_identity_residual(1), -1.0 / 3, 1e-15);
    EXPECT_GT(bt_identity_residual(3), 0);
}

TEST(BMin, Examples) {
    EXPECT_NEAR(b_min_threshold(2e10), 4.53, 0.01);
    EXPECT_NEAR(b_min_threshold(std::exp2(std::exp(1.0))), 2.0, 1e-12);
    EXPECT_NEAR(b_min_threshold(4), std::log(2.0) + 1, 1e-12);
    EXPECT_THROW(b_min_threshold(2), invalid_argument);
}

TEST(MeanVar, Examples) {
    EXPECT_NEAR(mean_closed(std::exp2(30)), 71.846, 1e-3);
    EXPECT_NEAR(var_closed(std::exp2(30)), 896.67, 0.05);
}

TEST(Distribution, Normalization) {
    for (double l : {10.0, 13.5, 20.0, 30.0, 60.0, 100.0, 200.0}) {
        const auto d = b_distribution(std::exp2(l));
        double s = 0;
        for (double p : d.probs) {
            ASSERT_GE(p, 0.0);
            s += p;
        }
        EXPECT_NEAR(s, 1.0, 1e-9) << l;
        EXPECT_GT(static_cast<double>(d.b_max()), mean_closed_l(l) + 12 * std::sqrt(var_closed_l(l)));
    }
    EXPECT_THROW(b_distribution(1000), invalid_argument);
}

TEST(Distribution, MomentsMatchClosedForms) {
    for (double l : {30.0, 60.0}) {
        const auto mo = moments(b_distribution(std::exp2(l)));
        EXPECT_NEAR(mo.mean / mean_closed_l(l), 1.0, 1e-3);
        EXPECT_NEAR(mo.variance / var_closed_l(l), 1.0, 1e-3);
        EXPECT_NEAR(mo.mean / mean_closed_l(l), 1.0, 1e-9);
        EXPECT_NEAR(mo.variance / var_closed_l(l), 1.0, 1e-7);
    }
}

TEST(Distribution, MatchesLogGammaOracle) {
    for (double l : {10.0, 34.2193, 100.0, 200.0}) {
        const auto mo = moments(b_distribution(std::exp2(l)));
        const auto ref = oracle_moments(l);
        EXPECT_NEAR(mo.total, ref.total, 1e-9);
        EXPECT_NEAR(mo.mean, ref.mean, 1e-8 * ref.mean);
        EXPECT_NEAR(mo.variance, ref.variance, 1e-7 * ref.variance);
        EXPECT_NEAR(mo.skewness, ref.skewness, 1e-6);
        EXPECT_NEAR(mo.excess_kurtosis, ref.excess_kurtosis, 1e-5);
    }
}

TEST(Normality, Decay) {
    EXPECT_LT(std::abs(normality_diagnostic(std::exp2(20)).skewness),
              std::abs(normality_diagnostic(std::exp2(10)).skewness));
    double prev_skew = 1e9, prev_kurt = 1e9;
    for (int k = 1; k <= 20; ++k) {
        const double l = 10.0 * k;
        const auto nd = normality_diagnostic(std::exp2(l));
        EXPECT_LT(std::abs(nd.skewness), prev_skew) << l;
        EXPECT_LT(std::abs(nd.excess_kurtosis), prev_kurt) << l;
        prev_skew = std::abs(nd.skewness);
        prev_kurt = std::abs(nd.excess_kurtosis);
    }
    // skewness shrinks like 1/sqrt(l): about 0.37 at l = 200
    const double s100 = normality_diagnostic(std::exp2(100)).skewness;
    const double s200 = normality_diagnostic(std::exp2(200)).skewness;
    EXPECT_NEAR(s100 / s200, std::sqrt(2.0), 0.02);
    EXPECT_NEAR(s200, oracle_moments(200).skewness, 1e-6);
}

TEST(Truncated, Examples) {
    const auto tb = m2_truncated(std::exp2(100));
    EXPECT_NEAR(tb.ratio, 0.954, 0.01);
    for (double l : {10.0, 20.0, 34.2193, 60.0, 100.0, 150.0}) {
        const auto r = m2_truncated(std::exp2(l));
        EXPECT_LT(r.ratio, 1.0);
        EXPECT_GT(r.ratio, 0.0);
        const double e = mean_closed_l(l), sd = std::sqrt(var_closed_l(l));
        EXPECT_EQ(static_cast<double>(r.b_lo), std::max(0.0, std::floor(e - 2 * sd)));
        EXPECT_EQ(static_cast<double>(r.b_hi), std::ceil(e + 2 * sd));
    }
}

TEST(Report, ToyValues) {
    const auto r = bounds_report(2e10);
    EXPECT_NEAR(r.sum_m2_b1_to_5, 4793, 1);
    EXPECT_NEAR(r.b_min, 4.53, 0.01);
    EXPECT_NEAR(r.m2_series_plus_one / r.m2_closed, 1.0, 1e-8);
    EXPECT_NEAR(r.m2_series_folded / r.m2_closed, 1.0, 1e-8);
    ASSERT_TRUE(r.numeric.has_value());
    ASSERT_TRUE(r.truncated.has_value());
    for (const auto& row : r.terms) {
        EXPECT_GE(row.m2, 0.0);
        EXPECT_GE(row.m3, 0.0);
        EXPECT_TRUE(std::isfinite(row.m2));
    }
    EXPECT_FALSE(bounds_report(100).numeric.has_value());
    EXPECT_THROW(bounds_report(2), invalid_argument);
}
