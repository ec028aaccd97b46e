#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "ldps/errors.hpp"

namespace ldps {

/// Reaction and diffusion coefficients of the SPDE, with their declared
/// Lipschitz / linear-growth constant K(T). linear_F marks coefficients whose
/// F does not depend on the state (enables the adjoint gradient path).
struct CoefficientSet {
    std::string name;
    std::function<double(double, double, double)> R;  ///< drift reaction R(t, r, x)
    std::function<double(double, double, double)> F;  ///< diffusion coefficient F(t, r, x)
    double lipschitz_K = 1.0;
    double growth_K = 1.0;
    bool linear_F = false;   ///< F constant in the state argument
    bool linear_R = false;   ///< R affine in the state argument

    double eval_R(double t, double r, double x) const { return R ? R(t, r, x) : 0.0; }
    double eval_F(double t, double r, double x) const { return F ? F(t, r, x) : 1.0; }
};

/// Finite-difference probe of the Lipschitz and growth constants over a box
/// of state values. Returns the largest measured ratio; callers compare it to
/// the declared constants.
struct LipschitzProbe {
    double lipschitz = 0.0;  ///< max |c(x)-c(y)| / |x-y| over probe pairs, R and F combined
    double growth = 0.0;     ///< max (|R| + |F|) / (1 + |x|)
};

inline LipschitzProbe probe_coefficients(const CoefficientSet& c, double x_lo = -5.0,
                                         double x_hi = 5.0, std::size_t n = 201) {
    LipschitzProbe p;
    const double t_samples[] = {0.0, 0.5, 1.0};
    const double r_samples[] = {0.25, 0.5, 0.75};
    const double h = (x_hi - x_lo) / static_cast<double>(n - 1);
    for (double t : t_samples)
        for (double r : r_samples) {
            double prev_R = c.eval_R(t, r, x_lo), prev_F = c.eval_F(t, r, x_lo);
            for (std::size_t i = 1; i < n; ++i) {
                const double x = x_lo + static_cast<double>(i) * h;
                const double cur_R = c.eval_R(t, r, x), cur_F = c.eval_F(t, r, x);
                p.lipschitz = std::max(p.lipschitz,
                                       (std::abs(cur_R - prev_R) + std::abs(cur_F - prev_F)) / h);
                p.growth = std::max(p.growth, (std::abs(cur_R) + std::abs(cur_F)) / (1.0 + std::abs(x)));
                prev_R = cur_R;
                prev_F = cur_F;
            }
        }
    return p;
}

/// Validate the declared constants against a probe; slack covers the finite
/// differencing.
inline void check_coefficients(const CoefficientSet& c, double slack = 0.05) {
    const LipschitzProbe p = probe_coefficients(c);
    if (p.lipschitz > c.lipschitz_K * (1.0 + slack))
        throw InvalidArgument("CoefficientSet '" + c.name + "': Lipschitz probe " +
                              std::to_string(p.lipschitz) + " exceeds declared K(T) " +
                              std::to_string(c.lipschitz_K));
    if (p.growth > c.growth_K * (1.0 + slack))
        throw InvalidArgument("CoefficientSet '" + c.name + "': growth probe exceeds declared bound");
}

/// Finite-dimensional SDE model dX = b(X) dt + theta a(X) dW + a(X) u dt.
struct FdModel {
    std::string name;
    std::size_t dim = 1;
    std::function<void(const std::vector<double>&, std::vector<double>&)> drift;      ///< b(x)
    std::function<void(const std::vector<double>&, std::vector<double>&)> diffusion;  ///< a(x), row-major dim x dim
    bool invertible_a = true;
    double lipschitz_K = 1.0;

    void eval_b(const std::vector<double>& x, std::vector<double>& out) const {
        if (drift) drift(x, out);
        else std::fill(out.begin(), out.end(), 0.0);
    }
    void eval_a(const std::vector<double>& x, std::vector<double>& out) const {
        if (diffusion) diffusion(x, out);
        else {
            std::fill(out.begin(), out.end(), 0.0);
            for (std::size_t i = 0; i < dim; ++i) out[i * dim + i] = 1.0;
        }
    }
};

} // namespace ldps
