#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "ldps/basis.hpp"
#include "ldps/errors.hpp"
#include "ldps/field.hpp"
#include "ldps/grid.hpp"
#include "ldps/rng.hpp"

namespace ldps {

/// A truncated family of i.i.d. standard Brownian paths beta_k on the time
/// grid. Increments are the stored primitive; path values are their prefix
/// sums, so the discrete independence structure is exact.
class BmPaths {
public:
    BmPaths(std::size_t n_modes, const GridSpec& grid)
        : n_modes_(n_modes), n_t_(grid.n_t), dt_(grid.dt()),
          increments_(n_modes * grid.n_t, 0.0), values_(n_modes * (grid.n_t + 1), 0.0) {}

    std::size_t n_modes() const { return n_modes_; }
    std::size_t n_t() const { return n_t_; }
    double dt() const { return dt_; }

    double increment(std::size_t k, std::size_t i) const { return increments_[k * n_t_ + i]; }
    double& increment(std::size_t k, std::size_t i) { return increments_[k * n_t_ + i]; }

    /// beta_k(t_i), i = 0..n_t.
    double value(std::size_t k, std::size_t i) const { return values_[k * (n_t_ + 1) + i]; }

    /// Recompute path values from increments.
    void accumulate() {
        for (std::size_t k = 0; k < n_modes_; ++k) {
            double acc = 0.0;
            values_[k * (n_t_ + 1)] = 0.0;
            for (std::size_t i = 0; i < n_t_; ++i) {
                acc += increments_[k * n_t_ + i];
                values_[k * (n_t_ + 1) + i + 1] = acc;
            }
        }
    }

private:
    std::size_t n_modes_;
    std::size_t n_t_;
    double dt_;
    std::vector<double> increments_;
    std::vector<double> values_;
};

/// One realization of driving sheet noise on the grid. Increments
/// dB[i][j] over (t_i, t_{i+1}] x cell_j are the primitive; the cumulative
/// B(t_i, x) lives on cell edges. truncation_modes = 0 marks a direct sample,
/// > 0 a spectral assembly truncated at that many modes.
class SheetSample {
public:
    explicit SheetSample(const GridSpec& grid, std::size_t truncation_modes = 0)
        : grid_(grid), truncation_modes_(truncation_modes),
          increments_(grid.n_t * grid.n_x, 0.0) {
        grid.validate();
    }

    const GridSpec& grid() const { return grid_; }
    std::size_t truncation_modes() const { return truncation_modes_; }

    double increment(std::size_t i, std::size_t j) const { return increments_[i * grid_.n_x + j]; }
    double& increment(std::size_t i, std::size_t j) { return increments_[i * grid_.n_x + j]; }
    const std::vector<double>& increments() const { return increments_; }

    /// Cumulative value B(t_i, e_j) at time index i and cell edge index
    /// j = 0..n_x (edge 0 is x = 0, where B vanishes).
    double cumulative(std::size_t i, std::size_t j_edge) const {
        double s = 0.0;
        for (std::size_t ii = 0; ii < i; ++ii)
            for (std::size_t jj = 0; jj < j_edge; ++jj) s += increment(ii, jj);
        return s;
    }

private:
    GridSpec grid_;
    std::size_t truncation_modes_;
    std::vector<double> increments_;
};

/// Draw n_modes i.i.d. standard Brownian paths on the grid's time lattice.
inline BmPaths sample_iid_bm(const GridSpec& grid, std::size_t n_modes, std::uint64_t seed) {
    grid.validate();
    if (n_modes < 1) throw InvalidArgument("sample_iid_bm: n_modes must be >= 1");
    BmPaths bm(n_modes, grid);
    const double sd = std::sqrt(grid.dt());
    for (std::size_t k = 0; k < n_modes; ++k) {
        const std::uint64_t stream = rng::stream_of(rng::Domain::BmIncrement, k);
        for (std::size_t i = 0; i < grid.n_t; ++i)
            bm.increment(k, i) = sd * rng::normal(seed, stream, i);
    }
    bm.accumulate();
    return bm;
}

/// Q-Wiener process from i.i.d. Brownian paths: W(t,x) = sum_k sqrt(lambda_k)
/// beta_k(t) phi_k(x). Linear in the paths.
inline Field assemble_q_wiener(const BmPaths& bm, const BasisSpec& basis, const GridSpec& grid) {
    basis.validate();
    if (basis.n_modes > bm.n_modes())
        throw InvalidArgument("assemble_q_wiener: basis has more modes than the Brownian family");
    if (bm.n_t() != grid.n_t) throw InvalidArgument("assemble_q_wiener: time grid mismatch");
    BasisTable table(basis, grid);
    Field w(grid);
    std::vector<double> coeff(basis.n_modes);
    for (std::size_t i = 0; i <= grid.n_t; ++i) {
        for (std::size_t k = 0; k < basis.n_modes; ++k)
            coeff[k] = std::sqrt(basis.eigenvalue(k)) * bm.value(k, i);
        w.set_slice(i, table.synthesize(coeff));
    }
    return w;
}

/// Cylindrical Brownian motion evaluated in the direction h:
/// B_t(h) = sum_k beta_k(t) <phi_k, h> with the grid quadrature inner product.
/// Returns the scalar path at t_0..t_{n_t}.
inline std::vector<double> assemble_cylindrical(const BmPaths& bm, const BasisSpec& basis,
                                                const GridSpec& grid, const std::vector<double>& h) {
    basis.validate();
    if (basis.n_modes > bm.n_modes())
        throw InvalidArgument("assemble_cylindrical: basis has more modes than the Brownian family");
    if (h.size() != grid.n_x) throw InvalidArgument("assemble_cylindrical: h must be cell-sampled");
    BasisTable table(basis, grid);
    const std::vector<double> proj = table.project_all(h);
    std::vector<double> path(grid.n_t + 1, 0.0);
    for (std::size_t i = 0; i <= grid.n_t; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < basis.n_modes; ++k) s += bm.value(k, i) * proj[k];
        path[i] = s;
    }
    return path;
}

/// Brownian sheet assembled from the truncated spectral series
/// B(t,x) = sum_k beta_k(t) int_0^x phi_k. The antiderivatives use the same
/// grid quadrature as assemble_cylindrical, so B(t, 1) matches the
/// cylindrical evaluation at h = 1 exactly.
inline SheetSample assemble_sheet_spectral(const BmPaths& bm, const BasisSpec& basis,
                                           const GridSpec& grid) {
    basis.validate();
    if (basis.n_modes > bm.n_modes())
        throw InvalidArgument("assemble_sheet_spectral: basis has more modes than the Brownian family");
    if (bm.n_t() != grid.n_t) throw InvalidArgument("assemble_sheet_spectral: time grid mismatch");
    BasisTable table(basis, grid);
    SheetSample sheet(grid, basis.n_modes);
    // per-cell weight of mode k: phi_k(x_j) dx, the quadrature cell mass
    for (std::size_t i = 0; i < grid.n_t; ++i)
        for (std::size_t j = 0; j < grid.n_x; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < basis.n_modes; ++k)
                s += bm.increment(k, i) * table.phi(k, j);
            sheet.increment(i, j) = s * grid.dx();
        }
    return sheet;
}

/// Direct Brownian-sheet sample: increments i.i.d. N(0, dt dx).
inline SheetSample sample_sheet_direct(const GridSpec& grid, std::uint64_t seed) {
    grid.validate();
    SheetSample sheet(grid);
    const double sd = std::sqrt(grid.dt() * grid.dx());
    for (std::size_t j = 0; j < grid.n_x; ++j) {
        const std::uint64_t stream = rng::stream_of(rng::Domain::SheetIncrement, j);
        for (std::size_t i = 0; i < grid.n_t; ++i)
            sheet.increment(i, j) = sd * rng::normal(seed, stream, i);
    }
    return sheet;
}

/// Closed-form sheet covariance on [0,T] x (0,1):
/// Cov(B(t,x), B(s,y)) = min(t,s) min(x,y).
inline double sheet_covariance(double t, double x, double s, double y, double T = 1.0) {
    if (!(t >= 0.0 && t <= T && s >= 0.0 && s <= T))
        throw InvalidArgument("sheet_covariance: time arguments outside [0,T]");
    if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0))
        throw InvalidArgument("sheet_covariance: space arguments outside closure(O)");
    return std::min(t, s) * std::min(x, y);
}

/// Truncation bias of the spectral covariance at N modes: the spectral series
/// replaces min(x,y) by sum_{k<=N} I_k(x) I_k(y) with I_k the antiderivative
/// of phi_k; the difference is the reported bias bound (it vanishes as N
/// grows, by Parseval).
inline double sheet_spectral_covariance_bias(const BasisSpec& basis, double t, double x,
                                             double s, double y) {
    double acc = 0.0;
    for (std::size_t k = 0; k < basis.n_modes; ++k)
        acc += basis.phi_antiderivative(k, x) * basis.phi_antiderivative(k, y);
    return std::abs(std::min(x, y) - acc) * std::min(t, s);
}

} // namespace ldps
