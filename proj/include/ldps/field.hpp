#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "ldps/errors.hpp"
#include "ldps/grid.hpp"

namespace ldps {

/// A space-time field X(t_i, x_j): one realization of a solution or a
/// deterministic trajectory. Rows are time slices t_0..t_{n_t}, columns are
/// cell centers.
class Field {
public:
    Field() = default;

    explicit Field(const GridSpec& grid, double fill = 0.0)
        : grid_(grid), values_((grid.n_t + 1) * grid.n_x, fill) {
        grid.validate();
    }

    static Field from_function(const GridSpec& grid, const std::function<double(double, double)>& f) {
        Field out(grid);
        for (std::size_t i = 0; i <= grid.n_t; ++i)
            for (std::size_t j = 0; j < grid.n_x; ++j)
                out.at(i, j) = f(grid.t(i), grid.x_center(j));
        return out;
    }

    const GridSpec& grid() const { return grid_; }
    std::size_t n_slices() const { return grid_.n_t + 1; }
    std::size_t n_x() const { return grid_.n_x; }

    double& at(std::size_t i, std::size_t j) { return values_[i * grid_.n_x + j]; }
    double at(std::size_t i, std::size_t j) const { return values_[i * grid_.n_x + j]; }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    /// Copy of time slice i.
    std::vector<double> slice(std::size_t i) const {
        return {values_.begin() + static_cast<std::ptrdiff_t>(i * grid_.n_x),
                values_.begin() + static_cast<std::ptrdiff_t>((i + 1) * grid_.n_x)};
    }

    void set_slice(std::size_t i, const std::vector<double>& s) {
        for (std::size_t j = 0; j < grid_.n_x; ++j) at(i, j) = s[j];
    }

    /// sup norm over the whole grid.
    double sup_norm() const {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    /// sup norm of the difference with another field on the same mesh.
    double sup_distance(const Field& other) const {
        if (!grid_.same_mesh(other.grid_)) throw InvalidArgument("Field: mesh mismatch");
        double m = 0.0;
        for (std::size_t n = 0; n < values_.size(); ++n)
            m = std::max(m, std::abs(values_[n] - other.values_[n]));
        return m;
    }

    /// Spatial alpha-Hoelder seminorm: sup over time slices and cell pairs of
    /// |X(t,r) - X(t,q)| / |r - q|^alpha.
    double holder_seminorm_space(double alpha) const {
        check_alpha(alpha);
        const std::size_t nx = grid_.n_x;
        double m = 0.0;
        for (std::size_t i = 0; i <= grid_.n_t; ++i) {
            const double* row = &values_[i * nx];
            for (std::size_t a = 0; a < nx; ++a)
                for (std::size_t b = a + 1; b < nx; ++b) {
                    const double dr = grid_.x_center(b) - grid_.x_center(a);
                    m = std::max(m, std::abs(row[b] - row[a]) / std::pow(dr, alpha));
                }
        }
        return m;
    }

    /// Spatial Hoelder norm: sup norm plus spatial seminorm.
    double holder_norm_space(double alpha) const {
        return sup_norm() + holder_seminorm_space(alpha);
    }

    /// Space-time alpha-Hoelder seminorm over pairs with Euclidean distance
    /// rho < 1 in [0,T] x O. Quadratic in grid size; keep meshes small.
    double holder_seminorm_spacetime(double alpha) const {
        check_alpha(alpha);
        const std::size_t nx = grid_.n_x, nsl = grid_.n_t + 1;
        double m = 0.0;
        for (std::size_t i1 = 0; i1 < nsl; ++i1)
            for (std::size_t j1 = 0; j1 < nx; ++j1) {
                const double v1 = at(i1, j1);
                for (std::size_t i2 = i1; i2 < nsl; ++i2) {
                    const double dtv = grid_.t(i2) - grid_.t(i1);
                    if (dtv >= 1.0) break;
                    const std::size_t j2_begin = (i2 == i1) ? j1 + 1 : 0;
                    for (std::size_t j2 = j2_begin; j2 < nx; ++j2) {
                        const double drv = grid_.x_center(j2) - grid_.x_center(j1);
                        const double rho2 = dtv * dtv + drv * drv;
                        if (rho2 >= 1.0 || rho2 == 0.0) continue;
                        m = std::max(m, std::abs(at(i2, j2) - v1) / std::pow(rho2, 0.5 * alpha));
                    }
                }
            }
        return m;
    }

    double holder_norm_spacetime(double alpha) const {
        return sup_norm() + holder_seminorm_spacetime(alpha);
    }

    Field& operator+=(const Field& o) {
        if (!grid_.same_mesh(o.grid_)) throw InvalidArgument("Field: mesh mismatch");
        for (std::size_t n = 0; n < values_.size(); ++n) values_[n] += o.values_[n];
        return *this;
    }

    Field& operator*=(double c) {
        for (double& v : values_) v *= c;
        return *this;
    }

private:
    static void check_alpha(double alpha) {
        if (!(alpha > 0.0 && alpha < 1.0))
            throw InvalidArgument("holder norm: alpha must lie in (0,1)");
    }

    GridSpec grid_;
    std::vector<double> values_;
};

} // namespace ldps
