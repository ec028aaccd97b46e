#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "ldps/errors.hpp"
#include "ldps/grid.hpp"

namespace ldps {

/// A square-integrable control field u(t_i, x_j), defined at the left
/// endpoint of each time step, with declared L^2 bound M (membership in the
/// discrete S^M). The running rectangle integral Int(u) is exposed for the
/// Girsanov shift.
class Control {
public:
    Control() = default;

    Control(const GridSpec& grid, double bound_M)
        : grid_(grid), bound_(bound_M), values_(grid.n_t * grid.n_x, 0.0) {
        grid.validate();
    }

    static Control zero(const GridSpec& grid, double bound_M = 0.0) {
        return Control(grid, bound_M);
    }

    static Control from_function(const GridSpec& grid,
                                 const std::function<double(double, double)>& u, double bound_M) {
        Control c(grid, bound_M);
        for (std::size_t i = 0; i < grid.n_t; ++i)
            for (std::size_t j = 0; j < grid.n_x; ++j)
                c.at(i, j) = u(grid.t(i), grid.x_center(j));
        c.check_bound();
        return c;
    }

    static Control from_values(const GridSpec& grid, std::vector<double> values, double bound_M) {
        if (values.size() != grid.n_t * grid.n_x)
            throw InvalidArgument("Control: expected n_t * n_x values");
        Control c(grid, bound_M);
        c.values_ = std::move(values);
        c.check_bound();
        return c;
    }

    const GridSpec& grid() const { return grid_; }
    double bound() const { return bound_; }
    double& at(std::size_t i, std::size_t j) { return values_[i * grid_.n_x + j]; }
    double at(std::size_t i, std::size_t j) const { return values_[i * grid_.n_x + j]; }
    const std::vector<double>& values() const { return values_; }

    /// sum u^2 dt dx over the grid.
    double l2_norm_sq() const {
        double s = 0.0;
        for (double v : values_) s += v * v;
        return s * grid_.dt() * grid_.dx();
    }

    /// Int(u)(t_i, e_j): integral of u over [0, t_i] x (0, e_j], e_j the
    /// j-th cell edge.
    double int_u(std::size_t i, std::size_t j_edge) const {
        double s = 0.0;
        for (std::size_t ii = 0; ii < i; ++ii)
            for (std::size_t jj = 0; jj < j_edge; ++jj) s += at(ii, jj);
        return s * grid_.dt() * grid_.dx();
    }

    void check_bound() const {
        if (bound_ > 0.0 && l2_norm_sq() > bound_ * (1.0 + 1e-12))
            throw InvalidArgument("Control: L2 mass exceeds the declared bound M");
    }

private:
    GridSpec grid_;
    double bound_ = 0.0;
    std::vector<double> values_;
};

} // namespace ldps
