#pragma once

#include <cstdint>
#include <cstddef>

#include "ldps/errors.hpp"

namespace ldps {

/// Uniform discretization of [0, T] x (0, 1) with a seed policy.
///
/// Time points t_i = i T / n_t, i = 0..n_t. Space is split into n_x uniform
/// cells; quadrature uses cell centers, cumulative sheet values live on cell
/// edges. The spatial domain is the unit interval (the shipped basis and
/// kernels are all d = 1).
struct GridSpec {
    double T = 1.0;          ///< time horizon
    std::size_t n_t = 50;    ///< number of time steps
    std::size_t n_x = 64;    ///< number of spatial cells
    std::uint64_t seed = 0;  ///< RNG seed for realizations on this grid

    void validate() const {
        if (!(T > 0.0)) throw InvalidArgument("GridSpec: T must be positive");
        if (n_t < 1) throw InvalidArgument("GridSpec: n_t must be >= 1");
        if (n_x < 1) throw InvalidArgument("GridSpec: n_x must be >= 1");
    }

    double dt() const { return T / static_cast<double>(n_t); }
    double dx() const { return 1.0 / static_cast<double>(n_x); }

    /// Time point t_i, i = 0..n_t.
    double t(std::size_t i) const { return static_cast<double>(i) * T / static_cast<double>(n_t); }
    /// Center of cell j, j = 0..n_x-1.
    double x_center(std::size_t j) const { return (static_cast<double>(j) + 0.5) / static_cast<double>(n_x); }
    /// Right edge of cell j (left edge of cell 0 is 0).
    double x_edge(std::size_t j) const { return static_cast<double>(j + 1) / static_cast<double>(n_x); }

    bool same_mesh(const GridSpec& o) const {
        return T == o.T && n_t == o.n_t && n_x == o.n_x;
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

} // namespace ldps
