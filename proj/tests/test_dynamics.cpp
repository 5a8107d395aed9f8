#include <gtest/gtest.h>

#include <set>

#include "collatz/dynamics.hpp"

using namespace collatz;

TEST(CollatzStep, Examples) {
    EXPECT_EQ(collatz_step<std::uint64_t>(1), 4u);
    EXPECT_EQ(collatz_step<std::uint64_t>(4), 2u);
    EXPECT_EQ(collatz_step<std::uint64_t>(7), 22u);
    EXPECT_EQ(collatz_step(BigInt(7)), 22);
}

TEST(Syracuse, Examples) {
    auto s3 = syracuse<std::uint64_t>(3);
    EXPECT_EQ(s3.next, 5u);
    EXPECT_EQ(s3.divisions, 1u);
    auto s5 = syracuse<std::uint64_t>(5);
    EXPECT_EQ(s5.next, 1u);
    EXPECT_EQ(s5.divisions, 4u);
    auto s17 = syracuse(BigInt(17));
    EXPECT_EQ(s17.next, 13);
    EXPECT_EQ(s17.divisions, 2u);
    EXPECT_THROW(syracuse<std::uint64_t>(4), invalid_argument);
}

TEST(Trajectory, Examples) {
    auto t1 = trajectory(1);
    EXPECT_EQ(t1.b, 0u);
    EXPECT_EQ(t1.a, 0u);
    EXPECT_TRUE(t1.v.empty());

    auto t3 = trajectory(3);
    EXPECT_EQ(t3.b, 2u);
    EXPECT_EQ(t3.a, 5u);
    EXPECT_EQ(t3.v, (std::vector<std::uint64_t>{4, 1}));

    auto t7 = trajectory(7);
    EXPECT_EQ(t7.b, 5u);
    EXPECT_EQ(t7.a, 11u);
    EXPECT_EQ(t7.v, (std::vector<std::uint64_t>{4, 3, 2, 1, 1}));
}

TEST(Trajectory, Invariants) {
    for (std::uint64_t n = 1; n < 5000; n += 2) {
        const auto t = trajectory(n);
        BigInt cur = n;
        std::set<BigInt> odd{cur};
        std::uint64_t a = 0;
        for (const auto& s : t.steps) {
            ASSERT_GE(s.divisions, 1u);
            ASSERT_TRUE(detail::is_odd(s.value));
            ASSERT_EQ(3 * cur + 1, s.value << s.divisions);
            a += s.divisions;
            cur = s.value;
            odd.insert(cur);
        }
        ASSERT_EQ(cur, 1);
        ASSERT_EQ(t.a, a);
        ASSERT_EQ(t.b + 1, odd.size());
        for (std::size_t i = 0; i < t.b; ++i) ASSERT_EQ(t.v[i], t.steps[t.b - 1 - i].divisions);
        ASSERT_EQ(syracuse_steps(n), t.b);
    }
}

TEST(Trajectory, BudgetIsEnforced) {
    EXPECT_THROW(trajectory(27, 10), step_budget_exceeded);
    EXPECT_EQ(trajectory(27).b, 41u);
    EXPECT_THROW(trajectory(4), invalid_argument);
}

TEST(Trajectory, BigStartFallsBack) {
    // 2^64 overflow path
    const std::uint64_t n = 0xFFFFFFFFFFFFFFFFULL;
    EXPECT_EQ(syracuse_steps(n), trajectory(BigInt(n)).b);
}

TEST(InverseChildren, Examples) {
    auto v = [](std::initializer_list<int> xs) {
        std::vector<BigInt> out;
        for (int x : xs) out.emplace_back(x);
        return out;
    };
    EXPECT_EQ(inverse_children(5, 60), v({3, 13, 53}));
    EXPECT_EQ(inverse_children(3, BigInt(1000000000)), v({}));
    EXPECT_EQ(inverse_children(1, 100), v({5, 21, 85}));
}

TEST(InverseChildren, RoundTrip) {
    const BigInt cutoff(1000000000);
    for (std::uint64_t n = 1; n <= 100000; n += 2) {
        const auto kids = inverse_children(n, cutoff);
        std::uint64_t prev_k = 0;
        for (const auto& c : kids) {
            const auto s = syracuse(c);
            ASSERT_EQ(s.next, n);
            ASSERT_EQ((BigInt(n) << s.divisions) - 1, 3 * c);
            ASSERT_GT(s.divisions, prev_k);
            prev_k = s.divisions;
        }
    }
}

TEST(InverseTree, Examples) {
    EXPECT_EQ(inverse_tree_count(1, 100), (std::vector<std::uint64_t>{3}));
    EXPECT_EQ(inverse_tree_count(1, 4), (std::vector<std::uint64_t>{0}));
    EXPECT_THROW(inverse_tree_count(0, 4), invalid_argument);
}

TEST(InverseTree, ToyValue) {
    const auto counts = inverse_tree_count(5, BigInt(20000000000ULL));
    EXPECT_EQ(counts, (std::vector<std::uint64_t>{16, 97, 383, 1278, 3736}));
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    EXPECT_EQ(total, 5510u);
}

TEST(InverseTree, DepthUniqueness) {
    const auto levels = inverse_tree_levels(8, BigInt(10000000));
    std::set<BigInt> seen;
    for (const auto& lvl : levels)
        for (const auto& n : lvl) ASSERT_TRUE(seen.insert(n).second) << n;
}

// Forward oracle: every odd n <= cutoff is bucketed by its step count.
TEST(InverseTree, MatchesForwardCount) {
    const std::uint64_t cutoff = 200000;
    const unsigned depth = 12;
    std::vector<std::uint64_t> oracle(depth, 0);
    for (std::uint64_t n = 3; n <= cutoff; n += 2) {
        const auto b = syracuse_steps(n);
        if (b >= 1 && b <= depth) ++oracle[b - 1];
    }
    EXPECT_EQ(inverse_tree_count(depth, BigInt(cutoff)), oracle);
}
