#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "ldps/errors.hpp"
#include "ldps/field.hpp"
#include "ldps/rng.hpp"

namespace ldps {

/// A bounded continuous test functional with its epsilon schedule. The clip
/// constant records how h was bounded; it is bookkeeping, not enforcement.
struct LaplaceSpec {
    double clip_bound = 0.0;
    std::vector<double> eps_schedule;
    std::size_t n_samples = 1000;

    void validate() const {
        if (eps_schedule.empty()) throw InvalidArgument("LaplaceSpec: empty eps schedule");
        for (std::size_t i = 1; i < eps_schedule.size(); ++i)
            if (!(eps_schedule[i] < eps_schedule[i - 1]))
                throw InvalidArgument("LaplaceSpec: eps schedule must be strictly decreasing");
    }
};

/// One per-eps Laplace estimate: -eps log E exp(-h(X^eps)/eps).
struct LaplaceRow {
    double eps = 0.0;
    double value = 0.0;
    double stderr_value = 0.0;  ///< delta-method standard error (0 for quadrature rows)
};

/// Monte Carlo log-mean-exp with max subtraction. sampler(k) must return
/// h(X^eps) for the k-th replica; the per-replica values are stored so the
/// reduction order is fixed regardless of scheduling.
inline LaplaceRow laplace_mc_estimate(double eps, std::size_t n,
                                      const std::function<double(std::size_t)>& h_of_replica) {
    if (n < 1000) throw InvalidArgument("laplace_mc_estimate: sample count must be >= 1000");
    std::vector<double> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = h_of_replica(k);
    const double vmin = *std::min_element(v.begin(), v.end());
    double s1 = 0.0, s2 = 0.0;
    for (double x : v) {
        const double y = std::exp(-(x - vmin) / eps);
        s1 += y;
        s2 += y * y;
    }
    const double mean = s1 / static_cast<double>(n);
    const double var = std::max(0.0, s2 / static_cast<double>(n) - mean * mean);
    LaplaceRow row;
    row.eps = eps;
    row.value = vmin - eps * std::log(mean);
    row.stderr_value = eps * std::sqrt(var / static_cast<double>(n)) / mean;
    return row;
}

/// Quadrature-exact Laplace value for a scalar Gaussian endpoint:
/// X^eps(T) ~ N(0, eps * variance_T), h a bounded function of the endpoint.
/// Composite Simpson on a range wide enough for both the Gaussian mass and
/// the h-tilt.
inline LaplaceRow laplace_terminal_quadrature(double eps, double variance_T,
                                              const std::function<double(double)>& h,
                                              std::size_t n_points = 80001) {
    const double sd = std::sqrt(eps * variance_T);
    const double L = 12.0 * sd + 8.0;
    if (n_points % 2 == 0) ++n_points;
    const double dz = 2.0 * L / static_cast<double>(n_points - 1);
    const double inv = 1.0 / (sd * std::sqrt(2.0 * std::numbers::pi));
    // integrate exp(-(z^2/(2 s^2) + h(z)/eps)) with max subtraction
    double emax = -std::numeric_limits<double>::infinity();
    std::vector<double> expo(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        const double z = -L + static_cast<double>(i) * dz;
        expo[i] = -(z * z / (2.0 * sd * sd) + h(z) / eps);
        emax = std::max(emax, expo[i]);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < n_points; ++i) {
        const double w = (i == 0 || i + 1 == n_points) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc += w * std::exp(expo[i] - emax);
    }
    acc *= dz / 3.0 * inv;
    LaplaceRow row;
    row.eps = eps;
    row.value = -eps * (emax + std::log(acc));
    row.stderr_value = 0.0;
    return row;
}

namespace detail {

/// Golden-section minimization of a unimodal scalar function on [lo, hi].
inline std::pair<double, double> golden_min(const std::function<double(double)>& f, double lo,
                                            double hi, double tol = 1e-7,
                                            std::size_t max_iter = 200) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    for (std::size_t i = 0; i < max_iter && (b - a) > tol; ++i) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

} // namespace detail

/// inf over a one-parameter target family of h(f_c) + I(f_c), by golden
/// section over c (the outer loop of the nested optimization).
inline std::pair<double, double> infimum_over_family(
    double c_lo, double c_hi, const std::function<double(double)>& h_plus_rate_of_c,
    double tol = 1e-7) {
    return detail::golden_min(h_plus_rate_of_c, c_lo, c_hi, tol);
}

/// Comparison of the per-eps Laplace estimates with the variational infimum.
struct LaplaceVerification {
    std::vector<LaplaceRow> rows;
    double inf_h_plus_I = 0.0;
    std::vector<double> gaps;       ///< |value - inf| per eps
    bool gaps_decreasing = false;   ///< strictly smaller gap at each smaller eps
    double final_gap = 0.0;
};

inline LaplaceVerification verify_laplace_rows(std::vector<LaplaceRow> rows, double inf_value) {
    LaplaceVerification rep;
    rep.rows = std::move(rows);
    rep.inf_h_plus_I = inf_value;
    rep.gaps_decreasing = true;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        rep.gaps.push_back(std::abs(rep.rows[i].value - inf_value));
        if (i > 0 && !(rep.gaps[i] < rep.gaps[i - 1])) rep.gaps_decreasing = false;
    }
    rep.final_gap = rep.gaps.empty() ? 0.0 : rep.gaps.back();
    return rep;
}

/// Uniform (finite-family) variant: per-eps maximum gap over the supplied
/// cases, the desk-scale shadow of uniformity over compacts.
inline LaplaceVerification verify_laplace_uniform(const std::vector<LaplaceVerification>& cases) {
    if (cases.empty()) throw InvalidArgument("verify_laplace_uniform: no cases");
    LaplaceVerification rep;
    const std::size_t n_eps = cases.front().rows.size();
    rep.rows = cases.front().rows;
    rep.inf_h_plus_I = 0.0;
    rep.gaps.assign(n_eps, 0.0);
    for (const auto& c : cases) {
        if (c.rows.size() != n_eps)
            throw InvalidArgument("verify_laplace_uniform: ragged eps schedules");
        for (std::size_t i = 0; i < n_eps; ++i) rep.gaps[i] = std::max(rep.gaps[i], c.gaps[i]);
    }
    rep.gaps_decreasing = true;
    for (std::size_t i = 1; i < n_eps; ++i)
        if (!(rep.gaps[i] < rep.gaps[i - 1])) rep.gaps_decreasing = false;
    rep.final_gap = rep.gaps.empty() ? 0.0 : rep.gaps.back();
    return rep;
}

} // namespace ldps
