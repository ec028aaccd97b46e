#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ldps/errors.hpp"
#include "ldps/field.hpp"
#include "ldps/noise.hpp"
#include "ldps/skeleton.hpp"
#include "ldps/walsh.hpp"

namespace ldps {
namespace io {

constexpr char kMagic[4] = {'L', 'D', 'P', 'S'};
constexpr std::uint16_t kDumpVersion = 1;

/// Compact binary dump: magic "LDPS", version u16, n_t u32, n_x u32,
/// n_modes u32, seed u64, then row-major 64-bit floats.
inline void write_binary_dump(const std::string& path, std::uint32_t n_t, std::uint32_t n_x,
                              std::uint32_t n_modes, std::uint64_t seed,
                              std::span<const double> data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("write_binary_dump: cannot open " + path);
    out.write(kMagic, 4);
    auto put = [&out](const void* p, std::size_t n) {
        out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    };
    put(&kDumpVersion, sizeof kDumpVersion);
    put(&n_t, sizeof n_t);
    put(&n_x, sizeof n_x);
    put(&n_modes, sizeof n_modes);
    put(&seed, sizeof seed);
    put(data.data(), data.size() * sizeof(double));
    if (!out) throw Error("write_binary_dump: write failed for " + path);
}

struct BinaryDump {
    std::uint16_t version = 0;
    std::uint32_t n_t = 0, n_x = 0, n_modes = 0;
    std::uint64_t seed = 0;
    std::vector<double> data;
};

inline BinaryDump read_binary_dump(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("read_binary_dump: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw Error("read_binary_dump: bad magic in " + path);
    BinaryDump d;
    auto get = [&in](void* p, std::size_t n) {
        in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    };
    get(&d.version, sizeof d.version);
    get(&d.n_t, sizeof d.n_t);
    get(&d.n_x, sizeof d.n_x);
    get(&d.n_modes, sizeof d.n_modes);
    get(&d.seed, sizeof d.seed);
    if (!in) throw Error("read_binary_dump: truncated header in " + path);
    while (true) {
        double v;
        in.read(reinterpret_cast<char*>(&v), sizeof v);
        if (!in) break;
        d.data.push_back(v);
    }
    return d;
}

inline std::ofstream open_text(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path);
    out << std::setprecision(17);
    return out;
}

/// Field as CSV rows t,x,value (cell centers).
inline void write_field_csv(const std::string& path, const Field& f) {
    std::ofstream out = open_text(path);
    out << "t,x,value\n";
    const GridSpec& g = f.grid();
    for (std::size_t i = 0; i <= g.n_t; ++i)
        for (std::size_t j = 0; j < g.n_x; ++j)
            out << g.t(i) << ',' << g.x_center(j) << ',' << f.at(i, j) << '\n';
}

/// Sheet realization as CSV of cumulative values on cell edges.
inline void write_sheet_csv(const std::string& path, const SheetSample& s) {
    std::ofstream out = open_text(path);
    out << "t,x,value\n";
    const GridSpec& g = s.grid();
    std::vector<double> row(g.n_x + 1, 0.0);
    for (std::size_t i = 0; i <= g.n_t; ++i) {
        if (i > 0) {
            double acc = 0.0;
            for (std::size_t j = 0; j < g.n_x; ++j) {
                acc += s.increment(i - 1, j);
                row[j + 1] += acc;
            }
        }
        for (std::size_t j = 0; j <= g.n_x; ++j)
            out << g.t(i) << ',' << (static_cast<double>(j) * g.dx()) << ',' << row[j] << '\n';
    }
}

/// Diagnostic dump of a Walsh integral path with its quadratic variation.
inline void write_walsh_csv(const std::string& path, const GridSpec& g,
                            const std::vector<double>& m_path, const std::vector<double>& qv_path) {
    std::ofstream out = open_text(path);
    out << "t,M,QV\n";
    for (std::size_t i = 0; i < m_path.size(); ++i)
        out << g.t(i) << ',' << m_path[i] << ',' << qv_path[i] << '\n';
}

inline void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    std::ofstream out = open_text(path);
    out << "eps,q50,q90,n_seeds\n";
    for (const auto& r : rows)
        out << r.eps << ',' << r.q50 << ',' << r.q90 << ',' << r.n_seeds << '\n';
}

/// Two-column gnuplot-friendly data file.
inline void write_dat(const std::string& path, const std::vector<std::pair<double, double>>& xy) {
    std::ofstream out = open_text(path);
    for (const auto& [x, y] : xy) out << x << ' ' << y << '\n';
}

} // namespace io
} // namespace ldps
