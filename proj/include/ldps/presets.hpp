#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ldps/coefficients.hpp"
#include "ldps/errors.hpp"

namespace ldps {
namespace presets {

/// Lipschitz-clipped cubic: x - x^3 inside [-1, 1], continued linearly with
/// the boundary slope outside, so the global Lipschitz constant is 2.
inline double clipped_cubic(double x) {
    if (x > 1.0) return -2.0 * (x - 1.0);
    if (x < -1.0) return -2.0 * (x + 1.0);
    return x - x * x * x;
}

/// R = 0, F = 1: the additive-noise heat equation.
inline CoefficientSet heat_linear() {
    CoefficientSet c;
    c.name = "heat-linear";
    c.R = nullptr;
    c.F = [](double, double, double) { return 1.0; };
    c.lipschitz_K = 1.0;
    c.growth_K = 1.0;
    c.linear_F = true;
    c.linear_R = true;
    return c;
}

/// R = Lipschitz-clipped cubic, F = 1 + min(|x|, 1).
inline CoefficientSet heat_reaction() {
    CoefficientSet c;
    c.name = "heat-reaction";
    c.R = [](double, double, double x) { return clipped_cubic(x); };
    c.F = [](double, double, double x) { return 1.0 + std::min(std::abs(x), 1.0); };
    c.lipschitz_K = 2.0 + 1.0;  // combined |R'| + |F'| bound used by the probe
    c.growth_K = 2.0;
    c.linear_F = false;
    c.linear_R = false;
    return c;
}

/// b = 0, a = 1 in one dimension.
inline FdModel fd_schilder() {
    FdModel m;
    m.name = "fd-schilder";
    m.dim = 1;
    m.drift = nullptr;
    m.diffusion = nullptr;  // identity
    m.invertible_a = true;
    m.lipschitz_K = 1.0;
    return m;
}

/// b(x) = -x, a = 1 in one dimension.
inline FdModel fd_ou() {
    FdModel m;
    m.name = "fd-ou";
    m.dim = 1;
    m.drift = [](const std::vector<double>& x, std::vector<double>& out) { out[0] = -x[0]; };
    m.diffusion = nullptr;
    m.invertible_a = true;
    m.lipschitz_K = 1.0;
    return m;
}

inline const std::vector<std::string>& catalog() {
    static const std::vector<std::string> names = {"heat-linear", "heat-reaction", "fd-schilder",
                                                   "fd-ou"};
    return names;
}

inline bool is_spde_preset(const std::string& name) {
    return name == "heat-linear" || name == "heat-reaction";
}

inline bool is_fd_preset(const std::string& name) {
    return name == "fd-schilder" || name == "fd-ou";
}

/// Look up an SPDE coefficient preset; the Lipschitz probe runs on load.
inline CoefficientSet spde_coefficients(const std::string& name) {
    CoefficientSet c;
    if (name == "heat-linear") c = heat_linear();
    else if (name == "heat-reaction") c = heat_reaction();
    else throw InvalidArgument("unknown SPDE preset '" + name + "'");
    check_coefficients(c);
    return c;
}

inline FdModel fd_model(const std::string& name) {
    if (name == "fd-schilder") return fd_schilder();
    if (name == "fd-ou") return fd_ou();
    throw InvalidArgument("unknown FD preset '" + name + "'");
}

} // namespace presets
} // namespace ldps
