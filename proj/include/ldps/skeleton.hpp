#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "ldps/control.hpp"
#include "ldps/errors.hpp"
#include "ldps/field.hpp"
#include "ldps/kernel.hpp"
#include "ldps/noise.hpp"
#include "ldps/solver.hpp"

namespace ldps {

enum class PicardInit {
    Zero,          ///< start from the zero field
    SemigroupOfX0  ///< start from t -> U(t,0) x0
};

struct PicardConfig {
    std::size_t max_iters = 200;
    double tolerance = 1e-9;  ///< sup-norm gap between successive iterates
    PicardInit init = PicardInit::SemigroupOfX0;

    void validate() const {
        if (!(tolerance > 0.0)) throw InvalidArgument("PicardConfig: tolerance must be positive");
        if (max_iters < 1) throw InvalidArgument("PicardConfig: max_iters must be >= 1");
    }
};

struct SkeletonResult {
    Field field;
    std::size_t iterations = 0;
    double final_gap = 0.0;
    std::vector<double> gap_history;
    bool converged = false;
};

namespace detail {

/// One application of the integral-equation map of the controlled skeleton:
/// g = Phi(f) marches g_{i+1} = U(dt)[ g_i + dt (R(t_i, x, f_i) +
/// F(t_i, x, f_i) u_i) ] with coefficients frozen at the previous iterate f.
inline Field picard_map(const MildStepper& stepper, const CoefficientSet& coeffs,
                        const std::vector<double>& x0, const Control& u, const Field& f) {
    const GridSpec& grid = f.grid();
    Field g(grid);
    g.set_slice(0, x0);
    std::vector<double> state = x0;
    std::vector<double> force(grid.n_x);
    const double dt = grid.dt();
    for (std::size_t i = 0; i < grid.n_t; ++i) {
        const double t = grid.t(i);
        for (std::size_t j = 0; j < grid.n_x; ++j) {
            const double x = f.at(i, j), r = grid.x_center(j);
            force[j] = dt * (coeffs.eval_R(t, r, x) + coeffs.eval_F(t, r, x) * u.at(i, j));
        }
        stepper.step(state, force);
        g.set_slice(i + 1, state);
    }
    return g;
}

} // namespace detail

/// Deterministic controlled integral equation: fixed point of
///   f(t) = U(t,0) x0 + int G R(f) + int G F(f) u,
/// computed by global Picard iteration over [0,T]. Non-convergence within the
/// iteration cap raises ConvergenceError carrying the gap history (the fixed
/// point exists and is unique, so failure signals a misconfiguration).
inline SkeletonResult solve_skeleton(const KernelModel& kernel, const CoefficientSet& coeffs,
                                     const std::vector<double>& x0, const Control& u,
                                     const PicardConfig& cfg = {}) {
    cfg.validate();
    const GridSpec& grid = u.grid();
    if (x0.size() != grid.n_x) throw InvalidArgument("solve_skeleton: x0 must be cell-sampled");

    detail::MildStepper stepper(kernel, grid);
    stepper.prepare();

    Field f(grid);
    if (cfg.init == PicardInit::SemigroupOfX0) {
        f.set_slice(0, x0);
        std::vector<double> state = x0;
        const std::vector<double> no_force(grid.n_x, 0.0);
        for (std::size_t i = 0; i < grid.n_t; ++i) {
            stepper.step(state, no_force);
            f.set_slice(i + 1, state);
        }
    } else {
        f.set_slice(0, x0);
    }

    SkeletonResult res;
    for (std::size_t it = 0; it < cfg.max_iters; ++it) {
        Field g = detail::picard_map(stepper, coeffs, x0, u, f);
        const double gap = g.sup_distance(f);
        res.gap_history.push_back(gap);
        f = std::move(g);
        res.iterations = it + 1;
        res.final_gap = gap;
        if (gap < cfg.tolerance) {
            res.converged = true;
            break;
        }
    }
    if (!res.converged)
        throw ConvergenceError("solve_skeleton: Picard iteration did not reach tolerance " +
                                   std::to_string(cfg.tolerance) + " within " +
                                   std::to_string(cfg.max_iters) + " iterations",
                               res.gap_history);
    res.field = std::move(f);
    return res;
}

/// One row of the Theorem-12 sweep table.
struct SweepRow {
    double eps = 0.0;
    double q50 = 0.0;
    double q90 = 0.0;
    std::size_t n_seeds = 0;
};

/// Distance sweep between the controlled stochastic solve at noise level
/// theta(eps) (with data x^eps, u^eps) and the limiting skeleton at (x, u):
/// empirical 50th/90th percentiles over seeds of the sup-norm distance.
inline std::vector<SweepRow> convergence_sweep(
    const KernelModel& kernel, const CoefficientSet& coeffs, const GridSpec& grid,
    const std::function<std::vector<double>(double)>& x_family,
    const std::function<Control(double)>& u_family,
    const std::function<double(double)>& theta,
    const std::vector<double>& eps_list, std::size_t n_seeds, std::uint64_t master_seed,
    const PicardConfig& picard = {}) {
    if (eps_list.empty()) throw InvalidArgument("convergence_sweep: empty eps list");
    for (std::size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1]))
            throw InvalidArgument("convergence_sweep: eps list must decrease");

    const std::vector<double> x_limit = x_family(0.0);
    const Control u_limit = u_family(0.0);
    const Field skel = solve_skeleton(kernel, coeffs, x_limit, u_limit, picard).field;

    std::vector<SweepRow> table;
    for (double eps : eps_list) {
        const std::vector<double> x_eps = x_family(eps);
        const Control u_eps = u_family(eps);
        std::vector<double> dist(n_seeds);
        for (std::size_t s = 0; s < n_seeds; ++s) {
            GridSpec g = grid;
            g.seed = rng::child_seed(master_seed, s);
            const SheetSample sheet = sample_sheet_direct(g, g.seed);
            const Field x = solve_controlled_spde(kernel, coeffs, theta(eps), x_eps, sheet, u_eps);
            dist[s] = x.sup_distance(skel);
        }
        std::sort(dist.begin(), dist.end());
        auto quant = [&](double q) {
            const double pos = q * static_cast<double>(n_seeds - 1);
            const std::size_t lo = static_cast<std::size_t>(pos);
            const std::size_t hi = std::min(lo + 1, n_seeds - 1);
            const double w = pos - static_cast<double>(lo);
            return (1.0 - w) * dist[lo] + w * dist[hi];
        };
        table.push_back({eps, quant(0.5), quant(0.9), n_seeds});
    }
    return table;
}

} // namespace ldps
