#pragma once

// CSV tables and key=value reports. Column orders are fixed; integers are
// written unquoted and reals with 12 significant digits.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>

#include "collatz/errors.hpp"
#include "collatz/harness/enumerate.hpp"
#include "collatz/harness/sweep.hpp"

namespace collatz {

class io_error : public error {
public:
    using error::error;
    int exit_code() const noexcept override { return 1; }
};

inline std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline std::string format_real(const std::optional<double>& x) {
    return x ? format_real(*x) : std::string("nan");
}

inline void write_hist_a(std::ostream& os, const CountTable& hist) {
    os << "a,count\n";
    for (std::uint64_t a = hist.a_min; a <= hist.a_max(); ++a) {
        const BigCount c = hist.at(a);
        if (c != 0) os << a << ',' << c << '\n';
    }
}

inline void write_joint(std::ostream& os, const JointTable& joint) {
    os << "v1,a1,count\n";
    for (std::size_t i = 0; i < joint.v_axis.size(); ++i)
        for (std::uint64_t a1 = joint.a1_min; a1 <= joint.a1_max; ++a1)
            if (auto c = joint.cell(i, a1)) os << joint.v_axis[i] << ',' << a1 << ',' << c << '\n';
}

inline void write_alpha(std::ostream& os, const AlphaTable& alpha) {
    os << "v1,a1,alpha\n";
    for (std::size_t i = 0; i < alpha.v_axis.size(); ++i)
        for (std::uint64_t a1 = alpha.a1_min; a1 <= alpha.a1_max; ++a1)
            os << alpha.v_axis[i] << ',' << a1 << ',' << format_real(alpha.at(i, a1)) << '\n';
}

inline void write_sweep(std::ostream& os, const SweepResult& sweep) {
    os << "b,N,cumN,M2,cumM2\n";
    for (const auto& r : sweep.rows)
        os << r.b << ',' << r.n << ',' << r.cum_n << ',' << format_real(r.m2) << ','
           << format_real(r.cum_m2) << '\n';
}

inline void write_compare_o(std::ostream& os, const std::vector<CompareORow>& rows) {
    os << "a,O,O1,O2,ratio1,ratio2,cumO,cumO1,cumO2\n";
    for (const auto& r : rows)
        os << r.a << ',' << r.o << ',' << format_real(r.o1.value()) << ',' << format_real(r.o2)
           << ',' << format_real(r.ratio1) << ',' << format_real(r.ratio2) << ',' << r.cum_o << ','
           << format_real(r.cum_o1.value()) << ',' << format_real(r.cum_o2) << '\n';
}

/// Opens `dir / name` for writing, creating `dir` if needed, and hands the stream
/// to `write`. Failures name the offending path.
template <class Writer>
void write_file(const std::filesystem::path& dir, const std::string& name, Writer&& write) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw io_error("cannot create directory " + dir.string() + ": " + ec.message());
    const auto path = dir / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("cannot open " + path.string() + " for writing");
    write(os);
    os.flush();
    if (!os) throw io_error("write failed: " + path.string());
}

} // namespace collatz
