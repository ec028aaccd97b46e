#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "ldps/coefficients.hpp"
#include "ldps/control.hpp"
#include "ldps/errors.hpp"
#include "ldps/field.hpp"
#include "ldps/kernel.hpp"
#include "ldps/noise.hpp"
#include "ldps/parallel.hpp"
#include "ldps/rng.hpp"
#include "ldps/solver.hpp"
#include "ldps/walsh.hpp"

namespace ldps {

struct GirsanovReport {
    double weighted_mean = 0.0;   ///< E[phi(X^{eps,u}) dgamma/dP]
    double baseline_mean = 0.0;   ///< E[phi(X^eps)]
    double diff = 0.0;
    double diff_stderr = 0.0;     ///< paired standard error of the difference
    double mean_weight = 0.0;     ///< E[dgamma/dP], 1 in expectation
    double weight_stderr = 0.0;
    double ess = 0.0;             ///< effective sample size of the weights
    std::size_t n_mc = 0;
    bool degenerate = false;      ///< ess below 1% of n_mc
    bool pass_mean_weight = false;
    bool pass_equality = false;
    bool pass = false;
};

/// Change-of-measure check: the density
///   dgamma/dP = exp{ -(1/sqrt(eps)) int u dB - (1/(2 eps)) int u^2 }
/// reweights the controlled solve back to the law of the uncontrolled one.
/// Both sides run on matched sheet samples; the equality test uses the paired
/// standard error, the unit-mean test the weight standard error, both at four
/// sigmas. Replicas fan out across threads into per-seed slots, so the
/// reduction is identical for any worker count.
inline GirsanovReport girsanov_check(const KernelModel& kernel, const CoefficientSet& coeffs,
                                     double eps, const std::vector<double>& x0, const Control& u,
                                     const std::function<double(const Field&)>& phi,
                                     std::size_t n_mc, std::uint64_t seed,
                                     const SolveOptions& opt = {}, std::size_t threads = 1) {
    if (!(eps > 0.0)) throw InvalidArgument("girsanov_check: eps must be positive");
    const GridSpec& grid = u.grid();
    const double u_mass = u.l2_norm_sq();
    const double inv_sqrt_eps = 1.0 / std::sqrt(eps);

    std::vector<double> weighted(n_mc), baseline(n_mc), weights(n_mc);
    parallel_for(n_mc, threads, [&](std::size_t s) {
        GridSpec g = grid;
        g.seed = rng::child_seed(seed, s);
        const SheetSample sheet = sample_sheet_direct(g, g.seed);

        double ito = 0.0;  // int u dB, deterministic integrand
        for (std::size_t i = 0; i < grid.n_t; ++i)
            for (std::size_t j = 0; j < grid.n_x; ++j)
                ito += u.at(i, j) * sheet.increment(i, j);
        const double w = std::exp(-inv_sqrt_eps * ito - u_mass / (2.0 * eps));

        const Field xc = solve_controlled_spde(kernel, coeffs, eps, x0, sheet, u, opt);
        const Field xb = solve_spde(kernel, coeffs, eps, x0, sheet, opt);
        weights[s] = w;
        weighted[s] = phi(xc) * w;
        baseline[s] = phi(xb);
    });

    GirsanovReport rep;
    rep.n_mc = n_mc;
    const double n = static_cast<double>(n_mc);
    double sw = 0.0, sw2 = 0.0, sa = 0.0, sb = 0.0, sd = 0.0, sd2 = 0.0;
    for (std::size_t s = 0; s < n_mc; ++s) {
        sw += weights[s];
        sw2 += weights[s] * weights[s];
        sa += weighted[s];
        sb += baseline[s];
        const double d = weighted[s] - baseline[s];
        sd += d;
        sd2 += d * d;
    }
    rep.mean_weight = sw / n;
    rep.weight_stderr = std::sqrt(std::max(0.0, sw2 / n - rep.mean_weight * rep.mean_weight) / n);
    rep.weighted_mean = sa / n;
    rep.baseline_mean = sb / n;
    rep.diff = sd / n;
    rep.diff_stderr = std::sqrt(std::max(0.0, sd2 / n - rep.diff * rep.diff) / n);
    rep.ess = (sw * sw) / (sw2 > 0.0 ? sw2 : 1.0);
    rep.degenerate = rep.ess < 0.01 * n;
    rep.pass_mean_weight = std::abs(rep.mean_weight - 1.0) <= 4.0 * rep.weight_stderr;
    rep.pass_equality = std::abs(rep.diff) <= 4.0 * rep.diff_stderr;
    rep.pass = rep.pass_mean_weight && rep.pass_equality && !rep.degenerate;
    return rep;
}

} // namespace ldps
