#pragma once

// Exhaustive enumeration of g_b*(1): every tail (v_2, ..., v_b) in [1, m]^{b-1}
// together with its unique v_1.
//
// Tails are walked in mixed-radix order. With s_i = v_2 + ... + v_i the congruence
// reduces to 2^{v_1} = sum_{i=1..b} 3^{i-1} 2^{-s_i} (mod 3^b), so moving to the
// next tail updates one term of that sum and v_1 is a single table lookup.
// Workers own disjoint ranges of v_2 and private histograms; the merge is a sum,
// so results do not depend on the worker count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "collatz/arith.hpp"
#include "collatz/compositions.hpp"
#include "collatz/errors.hpp"

namespace collatz {

inline constexpr std::uint64_t default_enumeration_cap = 6;

/// N_b(v, a_1) over v in V and a_1 in [b-1, m(b-1)].
struct JointTable {
    std::uint64_t b = 0;
    std::uint64_t m = 0;
    std::vector<std::uint64_t> v_axis;
    std::uint64_t a1_min = 0;
    std::uint64_t a1_max = 0;
    std::vector<std::uint64_t> cells;   // row-major: [v index][a_1 - a1_min]

    std::size_t columns() const noexcept { return a1_max - a1_min + 1; }

    std::uint64_t cell(std::size_t v_index, std::uint64_t a1) const {
        if (a1 < a1_min || a1 > a1_max) return 0;
        return cells[v_index * columns() + (a1 - a1_min)];
    }

    std::optional<std::size_t> index_of(std::uint64_t v) const {
        auto it = std::lower_bound(v_axis.begin(), v_axis.end(), v);
        if (it == v_axis.end() || *it != v) return std::nullopt;
        return static_cast<std::size_t>(it - v_axis.begin());
    }

    BigCount row_total(std::size_t v_index) const {
        BigCount s = 0;
        for (std::size_t j = 0; j < columns(); ++j) s += cells[v_index * columns() + j];
        return s;
    }

    BigCount column_total(std::uint64_t a1) const {
        BigCount s = 0;
        for (std::size_t i = 0; i < v_axis.size(); ++i) s += cell(i, a1);
        return s;
    }

    BigCount total() const {
        BigCount s = 0;
        for (auto c : cells) s += c;
        return s;
    }
};

struct Enumeration {
    std::uint64_t b = 0;
    std::uint64_t m = 0;
    CountTable a_histogram;    // O(b, a) for a in [b, m*b + 2]
    JointTable joint;
    BigCount cardinality = 0;
    std::uint64_t v1_min = 0;
    std::uint64_t v1_max = 0;
    std::uint64_t v1_outside_v = 0;   // solutions that are odd, divisible by 3 or out of window
};

namespace detail {

struct EnumerationPlan {
    std::uint64_t b, m, mod;
    std::vector<std::vector<std::uint32_t>> level_terms;   // [level][s] = 3^{level-1} 2^{-s}
    std::vector<std::uint32_t> v1_of;                      // residue -> v_1 in [4, m+3]
    std::uint64_t a_size;                                  // histogram indexed by a directly
    std::uint64_t a1_min, a1_cols;
};

struct EnumerationShard {
    std::vector<std::uint64_t> a_hist;
    std::vector<std::uint64_t> joint;   // [v_1 - 4][a_1 - a1_min], full window of v_1
};

inline EnumerationPlan make_plan(std::uint64_t b) {
    const Mod3Context ctx(static_cast<unsigned>(b));
    EnumerationPlan p;
    p.b = b;
    p.m = ctx.order_u64();
    p.mod = ctx.modulus_u64();
    p.level_terms.resize(b + 1);
    std::uint64_t pow3 = 1;
    for (std::uint64_t level = 2; level <= b; ++level) {
        pow3 *= 3;
        auto& t = p.level_terms[level];
        t.resize(p.m);
        for (std::uint64_t s = 0; s < p.m; ++s)
            t[s] = static_cast<std::uint32_t>(pow3 * ctx.pow2_u64((p.m - s) % p.m) % p.mod);
    }
    p.v1_of.assign(p.mod, 0);
    for (std::uint64_t k = 0; k < p.m; ++k)
        p.v1_of[ctx.pow2_u64(k)] = static_cast<std::uint32_t>(4 + (k + p.m - 4 % p.m) % p.m);
    p.a_size = p.m * b + 4;
    p.a1_min = b - 1;
    p.a1_cols = p.m * (b - 1) - p.a1_min + 1;
    return p;
}

inline void scan(const EnumerationPlan& p, EnumerationShard& out, std::uint64_t level,
                 std::uint64_t lo, std::uint64_t hi, std::uint64_t s, std::uint64_t w,
                 std::uint64_t a1) {
    const std::uint64_t m = p.m;
    const std::uint64_t mod = p.mod;
    const std::uint32_t* terms = p.level_terms[level].data();
    if (level == p.b) {
        std::uint64_t sv = (s + lo) % m;
        for (std::uint64_t v = lo; v <= hi; ++v) {
            std::uint64_t wv = w + terms[sv];
            if (wv >= mod) wv -= mod;
            const std::uint64_t v1 = p.v1_of[wv];
            const std::uint64_t a1v = a1 + v;
            ++out.a_hist[v1 + a1v];
            ++out.joint[(v1 - 4) * p.a1_cols + (a1v - p.a1_min)];
            if (++sv == m) sv = 0;
        }
        return;
    }
    for (std::uint64_t v = lo; v <= hi; ++v) {
        const std::uint64_t sv = (s + v) % m;
        std::uint64_t wv = w + terms[sv];
        if (wv >= mod) wv -= mod;
        scan(p, out, level + 1, 1, m, sv, wv, a1 + v);
    }
}

} // namespace detail

/// Enumerates g_b*(1) for 2 <= b <= cap with `threads` workers (0 = hardware).
inline Enumeration enumerate_gbstar(std::uint64_t b, unsigned threads = 1,
                                    std::uint64_t cap = default_enumeration_cap) {
    if (b < 2) throw invalid_argument("enumerate: b must be >= 2");
    if (b > cap || b > 8)
        throw resource_cap_exceeded("enumerate: b=" + std::to_string(b) + " exceeds cap " +
                                    std::to_string(std::min<std::uint64_t>(cap, 8)));
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

    const detail::EnumerationPlan plan = detail::make_plan(b);
    const std::uint64_t m = plan.m;
    const std::uint64_t workers = std::min<std::uint64_t>(threads, m);

    std::vector<detail::EnumerationShard> shards(workers);
    auto run = [&](std::uint64_t w) {
        auto& sh = shards[w];
        sh.a_hist.assign(plan.a_size, 0);
        sh.joint.assign(m * plan.a1_cols, 0);
        const std::uint64_t lo = 1 + w * m / workers;
        const std::uint64_t hi = (w + 1) * m / workers;
        if (lo <= hi) detail::scan(plan, sh, 2, lo, hi, 0, 1, 0);
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& t : pool) t.join();
    }

    // merge in worker order
    std::vector<std::uint64_t> a_hist(plan.a_size, 0);
    std::vector<std::uint64_t> joint_full(m * plan.a1_cols, 0);
    for (const auto& sh : shards) {
        for (std::size_t i = 0; i < a_hist.size(); ++i) a_hist[i] += sh.a_hist[i];
        for (std::size_t i = 0; i < joint_full.size(); ++i) joint_full[i] += sh.joint[i];
    }

    Enumeration e;
    e.b = b;
    e.m = m;
    e.a_histogram.b = b;
    e.a_histogram.m = m;
    e.a_histogram.a_min = b;
    for (std::uint64_t a = b; a < plan.a_size; ++a) e.a_histogram.counts.emplace_back(a_hist[a]);
    for (std::uint64_t a = 0; a < b; ++a)
        if (a_hist[a] != 0) throw invariant_violation("enumerate: a < b encountered");

    e.joint.b = b;
    e.joint.m = m;
    e.joint.v_axis = admissible_v1_set(m);
    e.joint.a1_min = plan.a1_min;
    e.joint.a1_max = m * (b - 1);
    e.joint.cells.assign(e.joint.v_axis.size() * plan.a1_cols, 0);
    e.v1_min = 0;
    for (std::uint64_t row = 0; row < m; ++row) {
        const std::uint64_t v1 = row + 4;
        std::uint64_t row_sum = 0;
        for (std::uint64_t j = 0; j < plan.a1_cols; ++j) row_sum += joint_full[row * plan.a1_cols + j];
        if (row_sum == 0) continue;
        if (e.v1_min == 0) e.v1_min = v1;
        e.v1_max = v1;
        auto idx = e.joint.index_of(v1);
        if (!idx) {
            e.v1_outside_v += row_sum;
            continue;
        }
        std::copy_n(joint_full.begin() + static_cast<std::ptrdiff_t>(row * plan.a1_cols),
                    plan.a1_cols,
                    e.joint.cells.begin() + static_cast<std::ptrdiff_t>(*idx * plan.a1_cols));
    }
    e.cardinality = e.a_histogram.total();
    return e;
}

/// alpha_b(v, a_1) = N_b(v, a_1) / (N_b(a_1) / |V|); nullopt where N_b(a_1) = 0.
struct AlphaTable {
    std::vector<std::uint64_t> v_axis;
    std::uint64_t a1_min = 0;
    std::uint64_t a1_max = 0;
    std::vector<std::optional<double>> cells;   // same layout as JointTable

    std::size_t columns() const noexcept { return a1_max - a1_min + 1; }
    std::optional<double> at(std::size_t v_index, std::uint64_t a1) const {
        return cells[v_index * columns() + (a1 - a1_min)];
    }
};

inline AlphaTable alpha_table(const JointTable& joint) {
    AlphaTable t;
    t.v_axis = joint.v_axis;
    t.a1_min = joint.a1_min;
    t.a1_max = joint.a1_max;
    const std::size_t cols = joint.columns();
    const double nv = static_cast<double>(joint.v_axis.size());
    t.cells.assign(joint.v_axis.size() * cols, std::nullopt);
    for (std::size_t j = 0; j < cols; ++j) {
        std::uint64_t col = 0;
        for (std::size_t i = 0; i < joint.v_axis.size(); ++i) col += joint.cells[i * cols + j];
        if (col == 0) continue;
        const double mean = static_cast<double>(col) / nv;
        for (std::size_t i = 0; i < joint.v_axis.size(); ++i)
            t.cells[i * cols + j] = static_cast<double>(joint.cells[i * cols + j]) / mean;
    }
    return t;
}

struct V1Cluster {
    std::uint64_t total;
    std::vector<std::uint64_t> members;   // v_1 values, ascending
};

struct V1MarginalStats {
    std::uint64_t a1_max = 0;
    std::vector<std::uint64_t> v_axis;
    std::vector<std::uint64_t> totals;   // sum_{a_1 <= a1_max} N_b(v, a_1), per v
    std::uint64_t min = 0;
    std::uint64_t max = 0;
    ExactRatio mean;
    double mean_value = 0;
    double sd_population = 0;
    double sd_sample = 0;
    std::vector<V1Cluster> clusters;   // grouped by equal totals, ascending total

    std::size_t singleton_clusters() const {
        return static_cast<std::size_t>(
            std::count_if(clusters.begin(), clusters.end(), [](const V1Cluster& c) { return c.members.size() == 1; }));
    }
    std::size_t cluster_count_of_size(std::size_t n) const {
        return static_cast<std::size_t>(
            std::count_if(clusters.begin(), clusters.end(), [n](const V1Cluster& c) { return c.members.size() == n; }));
    }
};

inline V1MarginalStats v1_marginal_stats(const JointTable& joint, std::uint64_t a1_max) {
    V1MarginalStats st;
    st.a1_max = a1_max;
    st.v_axis = joint.v_axis;
    const std::uint64_t hi = std::min(a1_max, joint.a1_max);
    for (std::size_t i = 0; i < joint.v_axis.size(); ++i) {
        std::uint64_t s = 0;
        for (std::uint64_t a1 = joint.a1_min; a1 <= hi; ++a1) s += joint.cell(i, a1);
        st.totals.push_back(s);
    }
    if (st.totals.empty()) return st;
    st.min = *std::min_element(st.totals.begin(), st.totals.end());
    st.max = *std::max_element(st.totals.begin(), st.totals.end());
    BigCount sum = 0;
    for (auto x : st.totals) sum += x;
    st.mean = {sum, BigCount(st.totals.size())};
    st.mean_value = st.mean.value();
    double ss = 0;
    for (auto x : st.totals) ss += (static_cast<double>(x) - st.mean_value) * (static_cast<double>(x) - st.mean_value);
    const double n = static_cast<double>(st.totals.size());
    st.sd_population = std::sqrt(ss / n);
    st.sd_sample = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;

    std::map<std::uint64_t, std::vector<std::uint64_t>> groups;
    for (std::size_t i = 0; i < st.totals.size(); ++i) groups[st.totals[i]].push_back(st.v_axis[i]);
    for (auto& [total, members] : groups) st.clusters.push_back({total, std::move(members)});
    return st;
}

struct CompareORow {
    std::uint64_t a;
    BigCount o;
    ExactRatio o1;
    std::optional<double> o2;
    std::optional<double> ratio1;
    std::optional<double> ratio2;
    BigCount cum_o;
    ExactRatio cum_o1;
    std::optional<double> cum_o2;
};

/// O(b,a) from the enumeration against O_1 and O_2, with running sums.
inline std::vector<CompareORow> compare_o(const Enumeration& e) {
    const WeightedTable mod = modified_table(e.b);
    std::vector<CompareORow> rows;
    BigCount cum_o = 0;
    BigCount cum_o1 = 0;
    double cum_o2 = 0;
    const std::uint64_t a_hi = std::max(e.a_histogram.a_max(), mod.a_max());
    for (std::uint64_t a = e.b; a <= a_hi; ++a) {
        CompareORow r;
        r.a = a;
        r.o = e.a_histogram.at(a);
        r.o1 = modified_coefficient(mod, a);
        cum_o += r.o;
        cum_o1 += r.o1.numerator;
        const double o = r.o.convert_to<double>();
        if (o2_in_domain(e.b, a)) {
            r.o2 = o2(e.b, a);
            cum_o2 += *r.o2;
            r.cum_o2 = cum_o2;
            if (o != 0) r.ratio2 = *r.o2 / o;
        }
        if (o != 0) r.ratio1 = r.o1.value() / o;
        r.cum_o = cum_o;
        r.cum_o1 = {cum_o1, mod.scale};
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace collatz
