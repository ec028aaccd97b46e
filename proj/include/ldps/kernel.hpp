#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "ldps/basis.hpp"
#include "ldps/errors.hpp"
#include "ldps/grid.hpp"

namespace ldps {

/// Two-parameter semigroup kernel G(t,s,r,q) in spectral form:
/// G = sum_k exp(-mu_k (t-s)) phi_k(r) phi_k(q), zero for t <= s.
///
/// The shipped instance is the Dirichlet heat kernel on (0,1),
/// mu_k = (k pi)^2, with declared constants K(T) = 1, gamma = 2, d = 1.
class KernelModel {
public:
    KernelModel(BasisSpec basis, std::vector<double> decay_rates, double K_T, double gamma,
                int dim = 1)
        : basis_(std::move(basis)), mu_(std::move(decay_rates)), K_T_(K_T), gamma_(gamma),
          dim_(dim) {
        basis_.validate();
        if (mu_.size() != basis_.n_modes)
            throw InvalidArgument("KernelModel: need one decay rate per mode");
        for (std::size_t k = 1; k < mu_.size(); ++k)
            if (!(mu_[k] > mu_[k - 1]))
                throw InvalidArgument("KernelModel: decay rates must be strictly increasing");
        if (!(mu_.empty() || mu_[0] > 0.0))
            throw InvalidArgument("KernelModel: decay rates must be positive");
        if (!(gamma_ > static_cast<double>(dim_)))
            throw InvalidArgument("KernelModel: gamma must exceed the spatial dimension");
        const double ab = alpha_bar();
        if (!(ab > 0.0 && ab < 0.5))
            throw InvalidArgument("KernelModel: alpha_bar must lie in (0, 1/2)");
    }

    /// Dirichlet heat kernel on (0,1) truncated at n_modes.
    static KernelModel heat(std::size_t n_modes, double K_T = 1.0) {
        std::vector<double> mu(n_modes);
        for (std::size_t k = 0; k < n_modes; ++k) {
            const double kpi = static_cast<double>(k + 1) * std::numbers::pi;
            mu[k] = kpi * kpi;
        }
        return KernelModel(BasisSpec::sine(n_modes), std::move(mu), K_T, 2.0, 1);
    }

    const BasisSpec& basis() const { return basis_; }
    std::size_t n_modes() const { return basis_.n_modes; }
    double mu(std::size_t k) const { return mu_[k]; }
    double declared_K() const { return K_T_; }
    double gamma() const { return gamma_; }
    int dim() const { return dim_; }
    double alpha_bar() const { return (gamma_ - static_cast<double>(dim_)) / (2.0 * gamma_); }

    /// Pointwise kernel value; zero when t <= s by convention.
    double eval(double t, double s, double r, double q) const {
        if (t <= s) return 0.0;
        const double tau = t - s;
        double acc = 0.0;
        for (std::size_t k = 0; k < mu_.size(); ++k) {
            const double damp = std::exp(-mu_[k] * tau);
            if (damp < 1e-300) break;
            acc += damp * basis_.phi(k, r) * basis_.phi(k, q);
        }
        return acc;
    }

private:
    BasisSpec basis_;
    std::vector<double> mu_;
    double K_T_;
    double gamma_;
    int dim_;
};

inline double kernel_eval(const KernelModel& k, double t, double s, double r, double q) {
    return k.eval(t, s, r, q);
}

/// Apply U(t,s) to a cell-sampled slice: project onto the basis, damp each
/// coefficient by exp(-mu_k (t-s)), resynthesize. U(t,t) is the identity up
/// to the orthonormality residual of the projection.
inline std::vector<double> apply_semigroup(const KernelModel& k, const BasisTable& table,
                                           double t, double s, const std::vector<double>& f) {
    if (t < s) throw InvalidArgument("apply_semigroup: requires t >= s");
    std::vector<double> coeff = table.project_all(f);
    const double tau = t - s;
    for (std::size_t m = 0; m < coeff.size(); ++m) coeff[m] *= std::exp(-k.mu(m) * tau);
    return table.synthesize(coeff);
}

/// Numerical audit of the semigroup-kernel estimates.
struct EstimateReport {
    double bound_54 = 0.0;      ///< max over lags/points of int |G(t,s,r,q)| dq
    double exponent_55 = 0.0;   ///< fitted exponent of sup |G| vs (t-s); target -d/gamma
    double exponent_510 = 0.0;  ///< fitted exponent of the L2 kernel difference vs rho; target 2 alpha
    double alpha = 0.0;         ///< Hoelder order used for the (5.10)-style fit
    bool pass_54 = false;
    bool pass_55 = false;
    bool pass_510 = false;
    bool passes = false;
    double k55_fit = 0.0;       ///< fitted constant of the singularity bound
    double k510_fit = 0.0;      ///< fitted constant of the L2 difference bound
    double declared_K = 0.0;
    double lag_lo_55 = 0.0, lag_hi_55 = 0.0;
    double lag_lo_510 = 0.0, lag_hi_510 = 0.0;

    nlohmann::ordered_json to_json() const {
        return {
            {"bound_54", bound_54},
            {"exponent_55", exponent_55},
            {"exponent_510", exponent_510},
            {"alpha", alpha},
            {"passes", passes},
            {"pass_54", pass_54},
            {"pass_55", pass_55},
            {"pass_510", pass_510},
            {"k55_fit", k55_fit},
            {"k510_fit", k510_fit},
            {"declared_K", declared_K},
            {"lag_range_55", {lag_lo_55, lag_hi_55}},
            {"lag_range_510", {lag_lo_510, lag_hi_510}},
        };
    }
};

struct Assumption4Options {
    double alpha = 0.2;           ///< must be < alpha_bar of the model
    std::size_t n_lags = 12;      ///< lags for the mass / singularity scans
    std::size_t n_lags_510 = 14;  ///< lags for the L2 difference fit
    double exponent_55_band = 0.05;
    double rel_band_510 = 0.20;
    double mass_slack = 1e-6;
};

namespace detail {

/// Ordinary least squares slope and intercept of y against x.
inline std::pair<double, double> ols(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    return {slope, intercept};
}

inline std::vector<double> geomspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
    return v;
}

/// Exact per-mode integral int_0^T (e^{-mu(t1-s)}1_{s<t1} a - e^{-mu(t2-s)}1_{s<t2} b)^2 ds
/// for t1 < t2; used by the (5.10)-style fit.
inline double l2_kernel_diff_sq(const KernelModel& k, double t1, double t2, double r1, double r2) {
    if (t1 > t2) { std::swap(t1, t2); std::swap(r1, r2); }
    const double d = t2 - t1;
    double acc = 0.0;
    for (std::size_t m = 0; m < k.n_modes(); ++m) {
        const double mu = k.mu(m);
        const double a = k.basis().phi(m, r1);
        const double b = k.basis().phi(m, r2);
        const double e = std::exp(-mu * d);
        const double term1 = (a - b * e) * (a - b * e) * (1.0 - std::exp(-2.0 * mu * t1)) / (2.0 * mu);
        const double term2 = b * b * (1.0 - std::exp(-2.0 * mu * d)) / (2.0 * mu);
        acc += term1 + term2;
    }
    return acc;
}

} // namespace detail

/// Audit the kernel against the semigroup estimates it declares.
///
/// (a) mass bound: max over lags in [dt, T/4] and grid points r of
///     int_O |G(t,s,r,q)| dq, checked against the declared K(T);
/// (b) singularity exponent: log-log fit of sup_{r,q} |G| over the same lags,
///     target -d/gamma. The sup over (r,q) equals the diagonal maximum since
///     |G(tau,r,q)| <= sqrt(G(tau,r,r) G(tau,q,q)) for spectral kernels;
/// (c) Hoelder exponent of the L2 kernel difference, time-direction pairs at
///     t1 = 0.05 T with lags in [max(dt, 0.025 T), 0.75 T], pooled over
///     interior points; target 2 alpha for the requested alpha < alpha_bar.
inline EstimateReport verify_assumption4(const KernelModel& k, const GridSpec& grid,
                                         const Assumption4Options& opt = {}) {
    grid.validate();
    const double dt = grid.dt(), T = grid.T;
    if (!(T / 4.0 > dt) || opt.n_lags < 4)
        throw InvalidArgument("verify_assumption4: fewer than 4 usable lag samples");
    if (!(opt.alpha > 0.0 && opt.alpha < k.alpha_bar()))
        throw InvalidArgument("verify_assumption4: alpha must lie in (0, alpha_bar)");

    EstimateReport rep;
    rep.alpha = opt.alpha;
    rep.declared_K = k.declared_K();
    rep.lag_lo_55 = dt;
    rep.lag_hi_55 = T / 4.0;

    const std::vector<double> lags = detail::geomspace(dt, T / 4.0, opt.n_lags);
    const std::size_t n_x = grid.n_x;

    // (5.4) mass bound and (5.5) singularity scan share the lag set.
    std::vector<double> log_lag, log_sup;
    double mass_max = 0.0;
    for (double tau : lags) {
        // diagonal values G(tau, r, r) in one spectral pass per point
        double sup_diag = 0.0;
        for (std::size_t a = 0; a < n_x; ++a) {
            const double r = grid.x_center(a);
            double g_rr = 0.0;
            for (std::size_t m = 0; m < k.n_modes(); ++m) {
                const double damp = std::exp(-k.mu(m) * tau);
                if (damp < 1e-300) break;
                const double p = k.basis().phi(m, r);
                g_rr += damp * p * p;
            }
            sup_diag = std::max(sup_diag, g_rr);

            double mass = 0.0;
            for (std::size_t b = 0; b < n_x; ++b)
                mass += std::abs(k.eval(tau, 0.0, r, grid.x_center(b)));
            mass *= grid.dx();
            mass_max = std::max(mass_max, mass);
        }
        log_lag.push_back(std::log(tau));
        log_sup.push_back(std::log(sup_diag));
    }
    rep.bound_54 = mass_max;
    auto [slope55, icpt55] = detail::ols(log_lag, log_sup);
    rep.exponent_55 = slope55;
    rep.k55_fit = std::exp(icpt55);

    // (5.10)-style Hoelder fit.
    const double lo510 = std::max(dt, 0.025 * T);
    const double hi510 = 0.75 * T;
    rep.lag_lo_510 = lo510;
    rep.lag_hi_510 = hi510;
    const std::vector<double> lags510 = detail::geomspace(lo510, hi510, opt.n_lags_510);
    const double t1 = 0.05 * T;
    const double points[] = {0.25, 0.4, 0.5, 0.6, 0.75};
    std::vector<double> lx, ly;
    for (double d : lags510)
        for (double r : points) {
            lx.push_back(std::log(d));
            ly.push_back(std::log(detail::l2_kernel_diff_sq(k, t1, t1 + d, r, r)));
        }
    auto [slope510, icpt510] = detail::ols(lx, ly);
    rep.exponent_510 = slope510;
    rep.k510_fit = std::exp(icpt510);

    const double target55 = -static_cast<double>(k.dim()) / k.gamma();
    const double target510 = 2.0 * opt.alpha;
    rep.pass_54 = rep.bound_54 <= k.declared_K() + opt.mass_slack;
    rep.pass_55 = std::abs(rep.exponent_55 - target55) <= opt.exponent_55_band;
    rep.pass_510 = std::abs(rep.exponent_510 - target510) <= opt.rel_band_510 * target510;
    rep.passes = rep.pass_54 && rep.pass_55 && rep.pass_510;
    return rep;
}

} // namespace ldps
