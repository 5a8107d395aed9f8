#pragma once

// Forward sweep: b(n) for every odd n < x, compared with the M2 terms.

#include <algorithm>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "collatz/bounds.hpp"
#include "collatz/dynamics.hpp"
#include "collatz/errors.hpp"

namespace collatz {

inline constexpr std::uint64_t default_sweep_cap = 100'000'000;

struct SweepRow {
    std::uint64_t b;
    std::uint64_t n;        // N(b, x)
    std::uint64_t cum_n;
    double m2;              // M2(b, x); b = 0 is the integer 1
    double cum_m2;
};

struct SweepResult {
    std::uint64_t x = 0;
    std::vector<SweepRow> rows;
    std::vector<std::uint64_t> dominance_violations;   // b with cum_m2 > cum_n

    std::uint64_t total() const { return rows.empty() ? 0 : rows.back().cum_n; }
};

inline SweepResult forward_sweep(std::uint64_t x, unsigned threads = 1,
                                 std::uint64_t cap = default_sweep_cap,
                                 std::uint64_t max_steps = 100'000) {
    if (x < 3) throw invalid_argument("sweep: x must be >= 3");
    if (x > cap)
        throw resource_cap_exceeded("sweep: x=" + std::to_string(x) + " exceeds cap " +
                                    std::to_string(cap));
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

    const std::uint64_t odd_count = x / 2;   // odd n in [1, x)
    const std::uint64_t workers = std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, odd_count));
    std::vector<std::vector<std::uint64_t>> hists(workers);
    auto run = [&](std::uint64_t w) {
        auto& h = hists[w];
        const std::uint64_t lo = w * odd_count / workers;
        const std::uint64_t hi = (w + 1) * odd_count / workers;
        for (std::uint64_t i = lo; i < hi; ++i) {
            const std::uint64_t b = syracuse_steps(2 * i + 1, max_steps);
            if (b >= h.size()) h.resize(b + 1, 0);
            ++h[b];
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& t : pool) t.join();
    }

    std::vector<std::uint64_t> hist;
    for (const auto& h : hists) {
        if (h.size() > hist.size()) hist.resize(h.size(), 0);
        for (std::size_t b = 0; b < h.size(); ++b) hist[b] += h[b];
    }

    SweepResult r;
    r.x = x;
    std::uint64_t cum_n = 0;
    double cum_m2 = 0;
    const auto xd = static_cast<double>(x);
    for (std::uint64_t b = 0; b < hist.size(); ++b) {
        cum_n += hist[b];
        const double m2 = m2_term(b, xd);
        cum_m2 += m2;
        r.rows.push_back({b, hist[b], cum_n, m2, cum_m2});
        if (cum_m2 > static_cast<double>(cum_n)) r.dominance_violations.push_back(b);
    }
    return r;
}

} // namespace collatz
