#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "ldps/errors.hpp"
#include "ldps/field.hpp"
#include "ldps/grid.hpp"
#include "ldps/noise.hpp"

namespace ldps {

/// A grid-predictable integrand f(t_i, x_j): the value used on the step
/// (t_i, t_{i+1}] may depend only on information up to t_i. Constructors
/// encode that convention; walsh_integrate refuses integrands whose
/// adaptedness flag is false.
class PredictableIntegrand {
public:
    /// Deterministic integrand sampled from a function of (t, x).
    static PredictableIntegrand from_deterministic(const GridSpec& grid,
                                                   const std::function<double(double, double)>& f) {
        PredictableIntegrand p(grid);
        for (std::size_t i = 0; i < grid.n_t; ++i)
            for (std::size_t j = 0; j < grid.n_x; ++j)
                p.values_[i * grid.n_x + j] = f(grid.t(i), grid.x_center(j));
        p.deterministic_ = true;
        p.adapted_ = true;
        return p;
    }

    /// Path-dependent integrand g(X(t_i, x_j)) built from a solver state: the
    /// step-i value reads the slice at the left endpoint t_i, so the result
    /// is adapted by construction.
    static PredictableIntegrand from_solver_path(const Field& state,
                                                 const std::function<double(double)>& g) {
        const GridSpec& grid = state.grid();
        PredictableIntegrand p(grid);
        for (std::size_t i = 0; i < grid.n_t; ++i)
            for (std::size_t j = 0; j < grid.n_x; ++j)
                p.values_[i * grid.n_x + j] = g(state.at(i, j));
        p.deterministic_ = false;
        p.adapted_ = true;
        return p;
    }

    /// Raw values with caller-declared adaptedness.
    static PredictableIntegrand from_values(const GridSpec& grid, std::vector<double> values,
                                            bool adapted) {
        if (values.size() != grid.n_t * grid.n_x)
            throw InvalidArgument("PredictableIntegrand: expected n_t * n_x values");
        PredictableIntegrand p(grid);
        p.values_ = std::move(values);
        p.deterministic_ = false;
        p.adapted_ = adapted;
        return p;
    }

    const GridSpec& grid() const { return grid_; }
    bool deterministic() const { return deterministic_; }
    bool adapted() const { return adapted_; }
    double at(std::size_t i, std::size_t j) const { return values_[i * grid_.n_x + j]; }
    const std::vector<double>& values() const { return values_; }

    /// Grid L^2 mass sum f^2 dt dx.
    double l2_norm_sq() const {
        double s = 0.0;
        for (double v : values_) s += v * v;
        return s * grid_.dt() * grid_.dx();
    }

private:
    explicit PredictableIntegrand(const GridSpec& grid)
        : grid_(grid), values_(grid.n_t * grid.n_x, 0.0) {
        grid.validate();
    }

    GridSpec grid_;
    std::vector<double> values_;
    bool deterministic_ = false;
    bool adapted_ = false;
};

/// Walsh stochastic integral M_t(f) against a sheet sample, with Ito
/// (left-endpoint) evaluation:
/// M_{t_k} = sum_{i<k} sum_j f(t_i, x_j) dB[i][j]. Returns the scalar path at
/// t_0..t_{n_t}; M_0 = 0. Linear in f and in B.
inline std::vector<double> walsh_integrate(const PredictableIntegrand& f, const SheetSample& B) {
    if (!f.grid().same_mesh(B.grid())) throw InvalidArgument("walsh_integrate: grid mismatch");
    if (!f.adapted()) throw InvalidArgument("walsh_integrate: integrand is not adapted");
    const std::size_t n_t = f.grid().n_t, n_x = f.grid().n_x;
    std::vector<double> path(n_t + 1, 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < n_t; ++i) {
        for (std::size_t j = 0; j < n_x; ++j) acc += f.at(i, j) * B.increment(i, j);
        path[i + 1] = acc;
    }
    return path;
}

/// Quadratic variation path <<M(f)>>_t = running sum of f^2 dt dx.
/// Nondecreasing, zero at t = 0.
inline std::vector<double> quadratic_variation(const PredictableIntegrand& f) {
    const std::size_t n_t = f.grid().n_t, n_x = f.grid().n_x;
    const double w = f.grid().dt() * f.grid().dx();
    std::vector<double> path(n_t + 1, 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < n_t; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n_x; ++j) row += f.at(i, j) * f.at(i, j);
        acc += row * w;
        path[i + 1] = acc;
    }
    return path;
}

} // namespace ldps
