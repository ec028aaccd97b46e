#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "ldps/basis.hpp"
#include "ldps/coefficients.hpp"
#include "ldps/control.hpp"
#include "ldps/errors.hpp"
#include "ldps/field.hpp"
#include "ldps/grid.hpp"
#include "ldps/kernel.hpp"
#include "ldps/noise.hpp"
#include "ldps/rng.hpp"

namespace ldps {

struct SolveOptions {
    double blowup_ceiling = 1e6;  ///< abort when the sup norm exceeds this
};

namespace detail {

/// Shared mild-solution stepper. One step of
///   X_{i+1} = U(dt)[ X_i + dt R(t_i, x, X_i) + F(t_i, x, X_i) w_i(x) ]
/// where w_i collects the per-cell stochastic and control mass of the step
/// converted to a density (division by dx happens in the caller). Coefficients
/// are evaluated at the left endpoint, matching predictability.
class MildStepper {
public:
    MildStepper(const KernelModel& kernel, const GridSpec& grid)
        : kernel_(kernel), table_(kernel.basis(), grid), grid_(grid),
          damp_(kernel.n_modes()) {
        const double dt = grid.dt();
        for (std::size_t m = 0; m < kernel_.n_modes(); ++m)
            damp_[m] = std::exp(-kernel_.mu(m) * dt);
    }

    const BasisTable& table() const { return table_; }

    /// Advance one step; force[j] is the total per-cell forcing density
    /// already including coefficients (R dt + F * noise/control mass / dx).
    void step(std::vector<double>& state, const std::vector<double>& force) const {
        for (std::size_t j = 0; j < grid_.n_x; ++j) scratch_[j] = state[j] + force[j];
        std::vector<double> coeff = table_.project_all(scratch_);
        for (std::size_t m = 0; m < coeff.size(); ++m) coeff[m] *= damp_[m];
        state = table_.synthesize(coeff);
    }

    void prepare() const { scratch_.assign(grid_.n_x, 0.0); }

private:
    const KernelModel& kernel_;
    BasisTable table_;
    GridSpec grid_;
    std::vector<double> damp_;
    mutable std::vector<double> scratch_;
};

inline void check_blowup(const std::vector<double>& slice, double t, double ceiling) {
    for (double v : slice) {
        if (!(std::abs(v) <= ceiling))
            throw BlowupError(t, std::abs(v), ceiling);
    }
}

} // namespace detail

namespace detail {

/// Shared march of the plain and controlled equations. u == nullptr stands
/// for the zero control and runs the identical instruction sequence, so the
/// two entry points agree bit for bit when the control vanishes.
inline Field solve_mild(const KernelModel& kernel, const CoefficientSet& coeffs, double eps,
                        const std::vector<double>& x0, const SheetSample& sheet,
                        const Control* u, const SolveOptions& opt) {
    const GridSpec& grid = sheet.grid();
    if (x0.size() != grid.n_x) throw InvalidArgument("solve_spde: x0 must be cell-sampled");
    if (!(eps >= 0.0)) throw InvalidArgument("solve_spde: eps must be nonnegative");
    if (u && !u->grid().same_mesh(grid))
        throw InvalidArgument("solve_controlled_spde: control grid mismatch");

    MildStepper stepper(kernel, grid);
    stepper.prepare();
    Field out(grid);
    out.set_slice(0, x0);
    std::vector<double> state = x0;
    std::vector<double> force(grid.n_x);
    const double dt = grid.dt(), inv_dx = 1.0 / grid.dx();
    const double sqrt_eps = std::sqrt(eps);
    for (std::size_t i = 0; i < grid.n_t; ++i) {
        const double t = grid.t(i);
        for (std::size_t j = 0; j < grid.n_x; ++j) {
            const double x = state[j], r = grid.x_center(j);
            // noise mass and control mass share the per-cell F and smoothing
            const double u_val = u ? u->at(i, j) : 0.0;
            const double mass = sqrt_eps * sheet.increment(i, j) * inv_dx + u_val * dt;
            force[j] = dt * coeffs.eval_R(t, r, x) + coeffs.eval_F(t, r, x) * mass;
        }
        stepper.step(state, force);
        check_blowup(state, grid.t(i + 1), opt.blowup_ceiling);
        out.set_slice(i + 1, state);
    }
    return out;
}

} // namespace detail

/// Mild solution of the reaction-diffusion SPDE
///   dX = (L X + R(t,r,X)) dt + sqrt(eps) F(t,r,X) B(dr dt),  X(0) = x0,
/// by explicit spectral time stepping with left-endpoint (Ito) coefficient
/// evaluation. Deterministic given the sheet sample.
inline Field solve_spde(const KernelModel& kernel, const CoefficientSet& coeffs, double eps,
                        const std::vector<double>& x0, const SheetSample& sheet,
                        const SolveOptions& opt = {}) {
    return detail::solve_mild(kernel, coeffs, eps, x0, sheet, nullptr, opt);
}

/// Controlled SPDE (the noise shifted by Int(u)): the control enters as the
/// extra drift F(t,r,Y) u dt, kernel-smoothed exactly like the noise term, so
/// on matched increments the solve equals solve_spde driven by
/// B + eps^{-1/2} Int(u). u == 0 reduces to solve_spde bit for bit; eps == 0
/// gives the deterministic controlled flow.
inline Field solve_controlled_spde(const KernelModel& kernel, const CoefficientSet& coeffs,
                                   double eps, const std::vector<double>& x0,
                                   const SheetSample& sheet, const Control& u,
                                   const SolveOptions& opt = {}) {
    return detail::solve_mild(kernel, coeffs, eps, x0, sheet, &u, opt);
}

/// Euler-Maruyama for the finite-dimensional controlled SDE
///   X_{i+1} = X_i + b(X_i) dt + theta a(X_i) dW_i + a(X_i) u_i dt.
/// theta = 0 and u = 0 gives the forward Euler flow of x' = b(x).
/// Returns the trajectory as (n_t + 1) stacked state vectors.
inline std::vector<std::vector<double>> solve_fd_sde(
    const FdModel& m, double theta, const std::vector<double>& x0, const BmPaths& W,
    const std::vector<std::vector<double>>& u, const SolveOptions& opt = {}) {
    if (x0.size() != m.dim) throw InvalidArgument("solve_fd_sde: dimension mismatch in x0");
    if (W.n_modes() < m.dim) throw InvalidArgument("solve_fd_sde: W has too few components");
    if (!u.empty() && u.size() != W.n_t())
        throw InvalidArgument("solve_fd_sde: control must have one value per step");
    if (!(theta >= 0.0 && theta <= 1.0)) throw InvalidArgument("solve_fd_sde: theta in [0,1]");

    const std::size_t n_t = W.n_t(), d = m.dim;
    const double dt = W.dt();
    std::vector<std::vector<double>> traj(n_t + 1, x0);
    std::vector<double> b(d), a(d * d), x = x0;
    for (std::size_t i = 0; i < n_t; ++i) {
        m.eval_b(x, b);
        m.eval_a(x, a);
        std::vector<double> next = x;
        for (std::size_t p = 0; p < d; ++p) {
            double drive = 0.0;
            for (std::size_t q = 0; q < d; ++q) {
                const double apq = a[p * d + q];
                drive += apq * theta * W.increment(q, i);
                if (!u.empty()) drive += apq * u[i][q] * dt;
            }
            next[p] += b[p] * dt + drive;
        }
        for (double v : next)
            if (!(std::abs(v) <= opt.blowup_ceiling))
                throw BlowupError(W.dt() * static_cast<double>(i + 1), std::abs(v), opt.blowup_ceiling);
        x = std::move(next);
        traj[i + 1] = x;
    }
    return traj;
}

/// Empirical p-th absolute moment surface of an ensemble of fields, its
/// maximum over the grid, and a bootstrap standard error of that maximum.
struct MomentSurface {
    Field surface;          ///< per-(t, r) empirical E|X|^p
    double max = 0.0;       ///< maximum over the grid
    double max_stderr = 0;  ///< bootstrap standard error of the maximum
};

inline MomentSurface estimate_moments(const std::vector<Field>& ensemble, double p,
                                      std::size_t n_bootstrap = 64,
                                      std::uint64_t bootstrap_seed = 0) {
    if (ensemble.empty()) throw InvalidArgument("estimate_moments: empty ensemble");
    if (!(p >= 1.0)) throw InvalidArgument("estimate_moments: p must be >= 1");
    const GridSpec& grid = ensemble.front().grid();
    const std::size_t cells = (grid.n_t + 1) * grid.n_x;
    const std::size_t n = ensemble.size();

    MomentSurface out{Field(grid), 0.0, 0.0};
    std::vector<double>& acc = out.surface.values();
    for (const Field& f : ensemble) {
        if (!f.grid().same_mesh(grid)) throw InvalidArgument("estimate_moments: mesh mismatch");
        const std::vector<double>& v = f.values();
        for (std::size_t c = 0; c < cells; ++c) acc[c] += std::pow(std::abs(v[c]), p);
    }
    for (std::size_t c = 0; c < cells; ++c) {
        acc[c] /= static_cast<double>(n);
        out.max = std::max(out.max, acc[c]);
    }

    if (n_bootstrap > 1 && n > 1) {
        double s1 = 0.0, s2 = 0.0;
        std::vector<double> resample(cells);
        for (std::size_t b = 0; b < n_bootstrap; ++b) {
            std::fill(resample.begin(), resample.end(), 0.0);
            for (std::size_t k = 0; k < n; ++k) {
                const std::size_t pick = static_cast<std::size_t>(
                    rng::hash(bootstrap_seed, rng::stream_of(rng::Domain::Bootstrap, b), k) % n);
                const std::vector<double>& v = ensemble[pick].values();
                for (std::size_t c = 0; c < cells; ++c) resample[c] += std::pow(std::abs(v[c]), p);
            }
            double mx = 0.0;
            for (std::size_t c = 0; c < cells; ++c)
                mx = std::max(mx, resample[c] / static_cast<double>(n));
            s1 += mx;
            s2 += mx * mx;
        }
        const double nb = static_cast<double>(n_bootstrap);
        const double var = std::max(0.0, s2 / nb - (s1 / nb) * (s1 / nb));
        out.max_stderr = std::sqrt(var);
    }
    return out;
}

/// Spatial alpha-Hoelder norm of a field (sup norm plus seminorm); the
/// space-time variant lives on Field directly.
inline double holder_norm(const Field& f, double alpha) {
    return f.holder_norm_space(alpha);
}

} // namespace ldps
