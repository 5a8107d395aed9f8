#pragma once

// Command-line front end. Exit codes: 0 success, 1 usage error, 2 invariant or
// assertion failure, 3 resource cap exceeded.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "collatz/arith.hpp"
#include "collatz/bounds.hpp"
#include "collatz/compositions.hpp"
#include "collatz/dynamics.hpp"
#include "collatz/harness/enumerate.hpp"
#include "collatz/harness/output.hpp"
#include "collatz/harness/sweep.hpp"
#include "collatz/tuples.hpp"

namespace collatz {

enum exit_code : int { exit_ok = 0, exit_usage = 1, exit_invariant = 2, exit_resource = 3 };

/// Parses "12345", "2e10" or "2.5e3" as an exact nonnegative integer.
inline BigInt parse_integer(const std::string& text) {
    if (text.empty()) throw invalid_argument("expected an integer, got an empty string");
    std::string mantissa = text;
    std::int64_t exponent = 0;
    if (auto pos = text.find_first_of("eE"); pos != std::string::npos) {
        mantissa = text.substr(0, pos);
        const std::string ex = text.substr(pos + 1);
        if (ex.empty() || ex.find_first_not_of("+0123456789") != std::string::npos ||
            ex.size() > 6)
            throw invalid_argument("bad exponent in '" + text + "'");
        exponent = std::stoll(ex);
    }
    std::string digits;
    for (char ch : mantissa) {
        if (ch == '.') continue;
        if (ch < '0' || ch > '9') throw invalid_argument("not an integer: '" + text + "'");
        digits.push_back(ch);
    }
    if (std::count(mantissa.begin(), mantissa.end(), '.') > 1)
        throw invalid_argument("not an integer: '" + text + "'");
    if (auto dot = mantissa.find('.'); dot != std::string::npos)
        exponent -= static_cast<std::int64_t>(mantissa.size() - dot - 1);
    if (digits.empty()) throw invalid_argument("not an integer: '" + text + "'");
    BigInt value(digits);
    if (exponent >= 0) return value * pow_big(10, static_cast<std::uint64_t>(exponent));
    const BigInt div = pow_big(10, static_cast<std::uint64_t>(-exponent));
    if (value % div != 0) throw invalid_argument("not an integer: '" + text + "'");
    return value / div;
}

inline std::vector<std::uint64_t> parse_csv_list(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const BigInt v = parse_integer(item);
        if (v > std::numeric_limits<std::uint64_t>::max())
            throw invalid_argument("list entry too large: " + item);
        out.push_back(v.convert_to<std::uint64_t>());
    }
    return out;
}

template <class Seq>
std::string join(const Seq& seq) {
    std::ostringstream os;
    bool first = true;
    for (const auto& x : seq) {
        if (!first) os << ',';
        os << x;
        first = false;
    }
    return os.str();
}

inline void print_enumeration_summary(std::ostream& os, const Enumeration& e,
                                      const V1MarginalStats& st) {
    os << "b=" << e.b << '\n'
       << "m=" << e.m << '\n'
       << "cardinality=" << e.cardinality << '\n'
       << "expected_cardinality=" << pow_big(static_cast<unsigned>(e.m), e.b - 1) << '\n'
       << "v1_min=" << e.v1_min << '\n'
       << "v1_max=" << e.v1_max << '\n'
       << "v1_outside_V=" << e.v1_outside_v << '\n'
       << "marginal_a1_max=" << st.a1_max << '\n'
       << "marginal_min=" << st.min << '\n'
       << "marginal_max=" << st.max << '\n'
       << "marginal_mean=" << st.mean.numerator << '/' << st.mean.denominator << '\n'
       << "marginal_mean_value=" << format_real(st.mean_value) << '\n'
       << "marginal_sd_population=" << format_real(st.sd_population) << '\n'
       << "marginal_sd_sample=" << format_real(st.sd_sample) << '\n'
       << "marginal_clusters=" << st.clusters.size() << '\n'
       << "marginal_singletons=" << st.singleton_clusters() << '\n'
       << "marginal_triples=" << st.cluster_count_of_size(3) << '\n'
       // The a_1 axis starts at b-1; sums "from a_1 = 1" cover the same cells.
       << "marginal_a1_domain=" << e.joint.a1_min << ".." << std::min(st.a1_max, e.joint.a1_max)
       << '\n';
}

inline void print_bounds_report(std::ostream& os, const BoundsReport& r) {
    os << "x=" << format_real(r.x) << '\n'
       << "log2_x=" << format_real(r.log2_x) << '\n'
       << "coefficient2=" << format_real(Constants::coefficient2) << '\n'
       << "coefficient3=" << format_real(Constants::coefficient3) << '\n'
       << "M2_closed=" << format_real(r.m2_closed) << '\n'
       << "M3_closed=" << format_real(r.m3_closed) << '\n'
       << "M2_series_plus_one=" << format_real(r.m2_series_plus_one) << '\n'
       << "M2_series_minus_half=" << format_real(r.m2_series_folded) << '\n'
       << "M3_series=" << format_real(r.m3_series) << '\n'
       << "sum_M2_b1_to_5=" << format_real(r.sum_m2_b1_to_5) << '\n'
       << "b_min=" << format_real(r.b_min) << '\n'
       << "E_B=" << format_real(r.mean_closed) << '\n'
       << "V_B=" << format_real(r.var_closed) << '\n'
       << "clamped_terms=" << r.clamped_terms << '\n';
    if (r.numeric) {
        os << "E_B_numeric=" << format_real(r.numeric->mean) << '\n'
           << "V_B_numeric=" << format_real(r.numeric->variance) << '\n'
           << "B_total_probability=" << format_real(r.numeric->total) << '\n'
           << "skewness=" << format_real(r.numeric->skewness) << '\n'
           << "excess_kurtosis=" << format_real(r.numeric->excess_kurtosis) << '\n';
    }
    if (r.truncated) {
        os << "M2_truncated=" << format_real(r.truncated->value) << '\n'
           << "M2_truncated_ratio=" << format_real(r.truncated->ratio) << '\n'
           << "M2_truncated_window=" << r.truncated->b_lo << ".." << r.truncated->b_hi << '\n';
    }
}

struct IdentityCheck {
    std::string name;
    double value;
    double expected;
    double error;
    double tolerance;
    bool pass() const { return error <= tolerance; }
};

inline std::vector<IdentityCheck> identity_checks(double tol) {
    std::vector<IdentityCheck> out;
    auto rel = [](double got, double want) { return std::abs(got - want) / std::abs(want); };
    for (double l : {0.0, 5.0, 10.0, 20.0, 34.2193}) {
        const double got = series_sum(l, 0.0, tol);
        const double want = std::exp2(l + 1) / Constants::c;
        out.push_back({"series_sum(l=" + format_real(l) + ")", got, want, rel(got, want), 1e-8});
    }
    for (double l : {10.0, 20.0, 34.2193}) {
        const double x = std::exp2(l);
        const double m2 = 1.5 * series_sum(l, -4.0, tol) - 0.5;
        out.push_back({"M2_closed(l=" + format_real(l) + ")", m2, m2_closed(x),
                       rel(m2, m2_closed(x)), 1e-8});
        const double m3 = 1.5 * series_sum(l, Constants::t - 6.0, tol);
        out.push_back({"M3_closed(l=" + format_real(l) + ")", m3, m3_closed(x),
                       rel(m3, m3_closed(x)), 1e-8});
    }
    out.push_back({"bt_residual(2)", bt_identity_residual(2.0), 0.0,
                   std::abs(bt_identity_residual(2.0)), 1e-12});
    out.push_back({"bt_residual(4)", bt_identity_residual(4.0), 0.0,
                   std::abs(bt_identity_residual(4.0)), 1e-12});
    out.push_back({"coefficient2", Constants::coefficient2, 0.45177,
                   std::abs(Constants::coefficient2 - 0.45177), 5e-6});
    out.push_back({"coefficient3", Constants::coefficient3, 0.3388,
                   std::abs(Constants::coefficient3 - 0.3388), 5e-5});
    return out;
}

inline unsigned resolve_threads(unsigned requested) {
    return requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"3x+1 admissible tuples, composition counts and bound diagnostics"};
    app.require_subcommand(1);

    std::string traj_n;
    auto* traj = app.add_subcommand("traj", "forward Syracuse trajectory of an odd n");
    traj->add_option("n", traj_n, "odd start value")->required();
    std::uint64_t traj_budget = 1'000'000;
    traj->add_option("--max-steps", traj_budget, "step budget");

    std::string verify_v;
    auto* verify = app.add_subcommand("verify-tuple", "admissibility and reconstruction of (v_1..v_b)");
    verify->add_option("--v", verify_v, "comma-separated v_1,...,v_b")->required();

    std::uint64_t solve_b = 0;
    std::string solve_tail;
    auto* solve = app.add_subcommand("solve-v1", "unique v_1 for a tail (v_2..v_b)");
    solve->add_option("--b", solve_b, "tuple length")->required();
    solve->add_option("--tail", solve_tail, "comma-separated v_2,...,v_b");

    std::uint64_t enum_b = 0;
    unsigned enum_threads = 0;
    std::string enum_out;
    std::uint64_t enum_cap = default_enumeration_cap;
    std::int64_t enum_a1_max = -1;
    auto* enumerate = app.add_subcommand("enumerate", "enumerate g_b*(1) and write its tables");
    enumerate->add_option("--b", enum_b, "tuple length")->required();
    enumerate->add_option("--threads", enum_threads, "worker count (0 = hardware)");
    enumerate->add_option("--out", enum_out, "output directory")->required();
    enumerate->add_option("--cap", enum_cap, "largest b allowed");
    enumerate->add_option("--a1-max", enum_a1_max, "a_1 bound for the v_1 marginal (default m/3)");

    std::uint64_t cmp_b = 0;
    unsigned cmp_threads = 0;
    std::string cmp_out;
    auto* compare = app.add_subcommand("compare-o", "O(b,a) against O_1 and O_2");
    compare->add_option("--b", cmp_b, "tuple length")->required();
    compare->add_option("--threads", cmp_threads, "worker count (0 = hardware)");
    compare->add_option("--out", cmp_out, "output directory")->required();

    std::string sweep_x;
    unsigned sweep_threads = 0;
    std::string sweep_out;
    std::uint64_t sweep_cap = default_sweep_cap;
    auto* sweep = app.add_subcommand("sweep", "b(n) for every odd n < x against the M2 terms");
    sweep->add_option("--x", sweep_x, "upper bound (exclusive)")->required();
    sweep->add_option("--threads", sweep_threads, "worker count (0 = hardware)");
    sweep->add_option("--out", sweep_out, "output directory")->required();
    sweep->add_option("--cap", sweep_cap, "largest x allowed");

    unsigned tree_depth = 0;
    std::string tree_max;
    auto* tree = app.add_subcommand("tree", "count the inverse tree of 1 by depth");
    tree->add_option("--depth", tree_depth, "maximum depth")->required();
    tree->add_option("--max", tree_max, "value cutoff")->required();

    double bounds_x = 0;
    bool bounds_terms = false;
    auto* bounds = app.add_subcommand("bounds", "closed forms, moments and truncation of M2");
    bounds->add_option("--x", bounds_x, "x")->required();
    bounds->add_flag("--terms", bounds_terms, "also print the per-b term table");

    double id_tol = default_series_tol;
    auto* identities = app.add_subcommand("identities", "numeric checks of the series identities");
    identities->add_option("--tol", id_tol, "series truncation tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*traj) {
            const Trajectory t = trajectory(parse_integer(traj_n), traj_budget);
            std::vector<std::string> orbit{t.n.str()};
            std::vector<unsigned> divisions;
            for (const auto& s : t.steps) {
                orbit.push_back(s.value.str());
                divisions.push_back(s.divisions);
            }
            out << "n=" << t.n << "\nb=" << t.b << "\na=" << t.a << "\nv=" << join(t.v)
                << "\norbit=" << join(orbit) << "\ndivisions=" << join(divisions) << '\n';
        } else if (*verify) {
            VTuple t{parse_csv_list(verify_v)};
            validate(t);
            const Mod3Context ctx(static_cast<unsigned>(t.b()));
            const bool ok = is_admissible(t, ctx);
            out << "b=" << t.b() << "\na=" << t.a() << "\nu=" << join(v_to_u(t).u)
                << "\nadmissible=" << (ok ? "true" : "false") << '\n';
            if (ok) out << "n=" << reconstruct_n(t) << '\n';
        } else if (*solve) {
            const auto tail = parse_csv_list(solve_tail);
            const Mod3Context ctx(static_cast<unsigned>(solve_b));
            const std::uint64_t v1 = solve_v1(solve_b, tail, ctx);
            VTuple t{{v1}};
            t.v.insert(t.v.end(), tail.begin(), tail.end());
            out << "b=" << solve_b << "\nm=" << ctx.order() << "\nv1=" << v1
                << "\nadmissible=" << (is_admissible(t, ctx) ? "true" : "false") << '\n';
        } else if (*enumerate) {
            const Enumeration e = enumerate_gbstar(enum_b, resolve_threads(enum_threads), enum_cap);
            const std::uint64_t a1_max = enum_a1_max >= 0 ? static_cast<std::uint64_t>(enum_a1_max) : e.m / 3;
            const V1MarginalStats st = v1_marginal_stats(e.joint, a1_max);
            const AlphaTable alpha = alpha_table(e.joint);
            const std::filesystem::path dir(enum_out);
            write_file(dir, "hist_a.csv", [&](std::ostream& os) { write_hist_a(os, e.a_histogram); });
            write_file(dir, "joint.csv", [&](std::ostream& os) { write_joint(os, e.joint); });
            write_file(dir, "alpha.csv", [&](std::ostream& os) { write_alpha(os, alpha); });
            write_file(dir, "summary.txt", [&](std::ostream& os) { print_enumeration_summary(os, e, st); });
            print_enumeration_summary(out, e, st);
            if (e.v1_outside_v != 0 || e.cardinality != pow_big(static_cast<unsigned>(e.m), e.b - 1))
                return exit_invariant;
        } else if (*compare) {
            const Enumeration e = enumerate_gbstar(cmp_b, resolve_threads(cmp_threads));
            const auto rows = compare_o(e);
            write_file(std::filesystem::path(cmp_out), "compare_o.csv",
                       [&](std::ostream& os) { write_compare_o(os, rows); });
            out << "b=" << cmp_b << "\nrows=" << rows.size() << "\ncumO=" << rows.back().cum_o
                << "\ncumO1=" << format_real(rows.back().cum_o1.value())
                // O_2 uses binom(a-5, b-1); the v_1 = 4 bound uses binom(a-6, b-1).
                << "\nO2_offset_note=O2 uses a-5; v1=4 bound uses a-6\n";
        } else if (*sweep) {
            const BigInt xb = parse_integer(sweep_x);
            if (xb > std::numeric_limits<std::uint64_t>::max())
                throw resource_cap_exceeded("sweep: x too large");
            const SweepResult r = forward_sweep(xb.convert_to<std::uint64_t>(),
                                                resolve_threads(sweep_threads), sweep_cap);
            write_file(std::filesystem::path(sweep_out), "sweep.csv",
                       [&](std::ostream& os) { write_sweep(os, r); });
            out << "x=" << r.x << "\nodd_starts=" << r.total() << "\nmax_b=" << r.rows.back().b
                << "\ndominance_violations=" << r.dominance_violations.size() << '\n';
        } else if (*tree) {
            const auto counts = inverse_tree_count(tree_depth, parse_integer(tree_max));
            std::uint64_t total = 0;
            for (std::size_t d = 0; d < counts.size(); ++d) {
                out << "depth=" << d + 1 << " count=" << counts[d] << '\n';
                total += counts[d];
            }
            out << "total=" << total << "\ntotal_with_1=" << total + 1 << '\n';
        } else if (*bounds) {
            const BoundsReport r = bounds_report(bounds_x);
            print_bounds_report(out, r);
            if (bounds_terms) {
                out << "b,M2,M3\n";
                for (const auto& row : r.terms)
                    out << row.b << ',' << format_real(row.m2) << ',' << format_real(row.m3) << '\n';
            }
        } else if (*identities) {
            bool all = true;
            for (const auto& c : identity_checks(id_tol)) {
                out << (c.pass() ? "PASS " : "FAIL ") << c.name << " value=" << format_real(c.value)
                    << " expected=" << format_real(c.expected) << " error=" << format_real(c.error)
                    << " tol=" << format_real(c.tolerance) << '\n';
                all = all && c.pass();
            }
            if (!all) return exit_invariant;
        }
    } catch (const error& e) {
        err << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_invariant;
    }
    return exit_ok;
}

} // namespace collatz
