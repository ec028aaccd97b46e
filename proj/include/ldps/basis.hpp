#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "ldps/errors.hpp"
#include "ldps/grid.hpp"

namespace ldps {

enum class BasisKind { Sine };

/// Complete orthonormal system on L^2(0,1), truncated at n_modes, together
/// with eigenvalues lambda_k for Q-Wiener assembly.
///
/// The shipped CONS is the sine basis phi_k(x) = sqrt(2) sin(k pi x): it is
/// orthonormal under the midpoint quadrature of the grid and diagonalizes the
/// Dirichlet heat kernel, so the same modes serve noise and semigroup.
struct BasisSpec {
    BasisKind kind = BasisKind::Sine;
    std::size_t n_modes = 32;
    std::vector<double> lambda;  ///< eigenvalues of Q; empty means lambda_k = 1/k^2

    static BasisSpec sine(std::size_t n_modes) {
        BasisSpec b;
        b.kind = BasisKind::Sine;
        b.n_modes = n_modes;
        return b;
    }

    void validate() const {
        if (n_modes < 1) throw InvalidArgument("BasisSpec: n_modes must be >= 1");
        if (!lambda.empty() && lambda.size() < n_modes)
            throw InvalidArgument("BasisSpec: lambda shorter than n_modes");
        for (double l : lambda)
            if (!(l > 0.0)) throw InvalidArgument("BasisSpec: eigenvalues must be positive");
    }

    /// phi_k evaluated at x; modes are 1-based in formulas, 0-based here.
    double phi(std::size_t k, double x) const {
        return std::numbers::sqrt2 * std::sin(static_cast<double>(k + 1) * std::numbers::pi * x);
    }

    /// Eigenvalue lambda_k (0-based k); defaults to the summable 1/(k+1)^2.
    double eigenvalue(std::size_t k) const {
        if (k < lambda.size()) return lambda[k];
        const double kk = static_cast<double>(k + 1);
        return 1.0 / (kk * kk);
    }

    /// Exact integral of phi_k over (0, x) for the sine basis.
    double phi_antiderivative(std::size_t k, double x) const {
        const double kpi = static_cast<double>(k + 1) * std::numbers::pi;
        return std::numbers::sqrt2 * (1.0 - std::cos(kpi * x)) / kpi;
    }
};

/// Basis evaluated on the cells of a grid. The table is the workhorse for
/// projections and syntheses: phi[k * n_x + j] = phi_k(x_j).
class BasisTable {
public:
    BasisTable(const BasisSpec& basis, const GridSpec& grid)
        : basis_(basis), n_modes_(basis.n_modes), n_x_(grid.n_x), dx_(grid.dx()),
          phi_(basis.n_modes * grid.n_x) {
        basis.validate();
        for (std::size_t k = 0; k < n_modes_; ++k)
            for (std::size_t j = 0; j < n_x_; ++j)
                phi_[k * n_x_ + j] = basis.phi(k, grid.x_center(j));
    }

    std::size_t n_modes() const { return n_modes_; }
    std::size_t n_x() const { return n_x_; }
    double dx() const { return dx_; }
    const BasisSpec& spec() const { return basis_; }
    double phi(std::size_t k, std::size_t j) const { return phi_[k * n_x_ + j]; }

    /// Midpoint-quadrature inner product <phi_k, h> of a cell-sampled h.
    double project(std::size_t k, const std::vector<double>& h) const {
        double s = 0.0;
        const double* pk = &phi_[k * n_x_];
        for (std::size_t j = 0; j < n_x_; ++j) s += pk[j] * h[j];
        return s * dx_;
    }

    /// All mode coefficients of h at once.
    std::vector<double> project_all(const std::vector<double>& h) const {
        std::vector<double> c(n_modes_);
        for (std::size_t k = 0; k < n_modes_; ++k) c[k] = project(k, h);
        return c;
    }

    /// Synthesize sum_k c_k phi_k on the cell centers.
    std::vector<double> synthesize(const std::vector<double>& c) const {
        std::vector<double> out(n_x_, 0.0);
        for (std::size_t k = 0; k < c.size() && k < n_modes_; ++k) {
            const double ck = c[k];
            if (ck == 0.0) continue;
            const double* pk = &phi_[k * n_x_];
            for (std::size_t j = 0; j < n_x_; ++j) out[j] += ck * pk[j];
        }
        return out;
    }

    /// Largest entry of |Gram - I| under the grid quadrature.
    double gram_residual() const {
        double worst = 0.0;
        for (std::size_t a = 0; a < n_modes_; ++a) {
            for (std::size_t b = a; b < n_modes_; ++b) {
                double s = 0.0;
                for (std::size_t j = 0; j < n_x_; ++j) s += phi(a, j) * phi(b, j);
                s *= dx_;
                const double target = (a == b) ? 1.0 : 0.0;
                worst = std::max(worst, std::abs(s - target));
            }
        }
        return worst;
    }

private:
    BasisSpec basis_;
    std::size_t n_modes_;
    std::size_t n_x_;
    double dx_;
    std::vector<double> phi_;
};

} // namespace ldps
