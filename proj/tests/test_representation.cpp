#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ldps/representation.hpp"

using namespace ldps;

TEST_CASE("gauss-hermite rule integrates gaussian moments", "[representation]") {
    const GaussHermite gh(16);
    double m0 = 0, m2 = 0, m4 = 0;
    for (std::size_t i = 0; i < 16; ++i) {
        m0 += gh.weights[i];
        m2 += gh.weights[i] * gh.nodes[i] * gh.nodes[i];
        m4 += gh.weights[i] * std::pow(gh.nodes[i], 4);
    }
    // int e^{-x^2} dx = sqrt(pi); x^2 -> sqrt(pi)/2; x^4 -> 3 sqrt(pi)/4
    const double sp = std::sqrt(std::numbers::pi);
    REQUIRE(m0 == Catch::Approx(sp).epsilon(1e-12));
    REQUIRE(m2 == Catch::Approx(sp / 2.0).epsilon(1e-12));
    REQUIRE(m4 == Catch::Approx(3.0 * sp / 4.0).epsilon(1e-12));
}

TEST_CASE("constant functionals make both sides trivial", "[representation]") {
    const double c = 1.375;
    const RepresentationReport rep =
        verify_representation(1.0, 4, [&](double) { return c; });
    REQUIRE(rep.lhs == Catch::Approx(c).margin(1e-9));
    REQUIRE(rep.rhs == Catch::Approx(c).margin(1e-9));
    REQUIRE(rep.gap < 1e-9);
}

TEST_CASE("clipped quadratic battery case meets the lattice tolerance", "[representation]") {
    // the acceptance configuration: short horizon keeps the adapted-lattice
    // upper bias inside the stated tolerance
    const auto f = [](double z) { return std::min(z * z, 4.0); };
    const RepresentationReport rep = verify_representation(0.25, 4, f);
    REQUIRE(rep.rhs >= rep.lhs - 1e-6);  // lattice controls only approach from above
    REQUIRE(rep.gap <= 2e-2);
    // frozen scratch-oracle values for this configuration
    REQUIRE(rep.lhs == Catch::Approx(0.202732).margin(2e-4));
    REQUIRE(rep.rhs == Catch::Approx(0.219108).margin(2e-3));
}

TEST_CASE("quadratic functional matches the exact log-determinant limit", "[representation]") {
    // without clipping the continuous value is log(1 + 2T)/2; the DP gap
    // shrinks with the horizon
    const auto f = [](double z) { return std::min(z * z, 100.0); };
    const double T = 0.125;
    const RepresentationReport rep = verify_representation(T, 4, f);
    REQUIRE(rep.lhs == Catch::Approx(0.5 * std::log(1.0 + 2.0 * T)).margin(1e-6));
    REQUIRE(rep.gap < 1e-2);
}

TEST_CASE("the dp value decreases toward the lhs as steps refine", "[representation]") {
    // finer control lattice so the refinement trend is not masked by control
    // quantization (the lattice spacing grows with the per-step range)
    const auto f = [](double z) { return std::min(z * z, 4.0); };
    const double T = 0.5;
    RepresentationOptions opt;
    opt.n_ctrl = 201;
    const RepresentationReport r4 = verify_representation(T, 4, f, opt);
    const RepresentationReport r8 = verify_representation(T, 8, f, opt);
    const RepresentationReport r16 = verify_representation(T, 16, f, opt);
    REQUIRE(r8.rhs < r4.rhs);
    REQUIRE(r16.rhs < r8.rhs);
    REQUIRE(r16.gap < r4.gap);
}

TEST_CASE("lattice ceiling is enforced", "[representation]") {
    RepresentationOptions opt;
    opt.lattice_ceiling = 10.0;
    REQUIRE_THROWS_AS(representation_dp_value(1.0, 4, [](double z) { return z * z; }, opt),
                      InvalidArgument);
}

TEST_CASE("sheet functional through one mode reduces to one brownian motion", "[representation]") {
    const GridSpec grid{0.25, 4, 32, 0};
    const BasisSpec basis = BasisSpec::sine(4);
    const auto f = [](double z) { return std::min(z * z, 4.0); };
    const RepresentationReport rep =
        verify_representation_sheet(grid, basis, 0, f, 40000, 1234);
    // MC lhs agrees with the dp rhs within lattice tolerance + 4 mc sigmas
    REQUIRE(std::abs(rep.lhs - rep.rhs) <= 2e-2 + 4.0 * rep.lhs_stderr);
    // and with the quadrature lhs within 4 sigmas
    const RepresentationReport quad = verify_representation(grid.T, grid.n_t, f);
    REQUIRE(std::abs(rep.lhs - quad.lhs) <= 4.0 * rep.lhs_stderr);
}
