#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ldps/rng.hpp"

using namespace ldps;

TEST_CASE("counter rng is a pure function of its inputs", "[rng]") {
    const double a = rng::normal(42, 7, 1001);
    const double b = rng::normal(42, 7, 1001);
    REQUIRE(a == b);
    REQUIRE(rng::normal(42, 7, 1002) != a);
    REQUIRE(rng::normal(43, 7, 1001) != a);
    REQUIRE(rng::normal(42, 8, 1001) != a);
}

TEST_CASE("inverse normal cdf hits tabulated quantiles", "[rng]") {
    REQUIRE(rng::inverse_normal_cdf(0.5) == Catch::Approx(0.0).margin(1e-15));
    REQUIRE(rng::inverse_normal_cdf(0.975) == Catch::Approx(1.959963984540054).epsilon(1e-12));
    REQUIRE(rng::inverse_normal_cdf(0.84134474606854293) == Catch::Approx(1.0).epsilon(1e-10));
    REQUIRE(rng::inverse_normal_cdf(1e-10) == Catch::Approx(-6.361340902404056).epsilon(1e-9));
    REQUIRE(rng::inverse_normal_cdf(0.3) == Catch::Approx(-rng::inverse_normal_cdf(0.7)).epsilon(1e-13));
}

TEST_CASE("uniform and normal draws match their first two moments", "[rng]") {
    const std::size_t n = 100000;
    double su = 0, su2 = 0, sn = 0, sn2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng::uniform01(11, 3, i);
        const double z = rng::normal(11, 4, i);
        su += u; su2 += u * u;
        sn += z; sn2 += z * z;
    }
    const double nu = static_cast<double>(n);
    const double mean_u = su / nu, var_u = su2 / nu - mean_u * mean_u;
    const double mean_n = sn / nu, var_n = sn2 / nu - mean_n * mean_n;
    // 4-sigma bands around the exact uniform/normal moments
    REQUIRE(std::abs(mean_u - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / nu));
    REQUIRE(std::abs(var_u - 1.0 / 12.0) < 4.0 * 0.0745 / std::sqrt(nu));
    REQUIRE(std::abs(mean_n) < 4.0 / std::sqrt(nu));
    REQUIRE(std::abs(var_n - 1.0) < 4.0 * std::sqrt(2.0 / nu));
}

TEST_CASE("child seeds separate ensemble members", "[rng]") {
    REQUIRE(rng::child_seed(1, 0) != rng::child_seed(1, 1));
    REQUIRE(rng::child_seed(1, 0) != rng::child_seed(2, 0));
    REQUIRE(rng::child_seed(5, 123) == rng::child_seed(5, 123));
}
