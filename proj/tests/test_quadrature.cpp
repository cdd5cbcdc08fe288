// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "tilegen/quadrature.hpp"
#include "tilegen/special.hpp"

using namespace tilegen;

TEST_CASE("polynomials integrate exactly") {
  auto f = [](double x) { return 3.0 * x * x; };
  REQUIRE(integrate(f, 0.0, 2.0) == Catch::Approx(8.0).epsilon(1e-12));
  REQUIRE(integrate([](double) { return 1.0; }, 0.0, 1.0) ==
          Catch::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("gaussian mass over [-6,6] matches erf") {
  const double inv = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  auto f = [inv](double x) { return inv * std::exp(-0.5 * x * x); };
  const double expected = std::erf(6.0 / std::sqrt(2.0));
  REQUIRE(integrate(f, -6.0, 6.0) == Catch::Approx(expected).epsilon(1e-9));
}

TEST_CASE("oscillatory integrand at tight tolerance") {
  auto f = [](double x) { return std::sin(10.0 * x); };
  const double expected = (1.0 - std::cos(20.0)) / 10.0;
  REQUIRE(integrate(f, 0.0, 2.0) == Catch::Approx(expected).margin(1e-10));
}

TEST_CASE("endpoint singularity with nudging: inverse square root") {
  QuadratureOptions opts;
  opts.nudge_singular_endpoints = true;
  auto f = [](double x) { return 1.0 / std::sqrt(x); };
  REQUIRE(integrate(f, 0.0, 1e-4, opts) ==
          Catch::Approx(2.0 * std::sqrt(1e-4)).epsilon(1e-6));
}

TEST_CASE("endpoint singularity with nudging: log pole via bessel K0") {
  QuadratureOptions opts;
  opts.nudge_singular_endpoints = true;
  auto f = [](double x) {
    return x == 0.0 ? std::numeric_limits<double>::infinity() : bessel_k0(x);
  };
  // int_0^eps K0 ~ eps (1 - log(eps/2) - euler_gamma) for small eps
  const double eps = 1e-5;
  const double expected = eps * (1.0 - std::log(eps / 2.0) - 0.57721566490153286);
  REQUIRE(integrate(f, 0.0, eps, opts) ==
          Catch::Approx(expected).epsilon(1e-6));
}

TEST_CASE("interior non-finite value raises QuadratureFailure") {
  auto f = [](double x) { return 1.0 / x; };  // pole at 0 inside range
  REQUIRE_THROWS_AS(integrate(f, -1.0, 1.0), QuadratureFailure);
}

TEST_CASE("incomplete gamma agrees with known chi-square tails") {
  // chi-square with 1 dof: P(X > 3.841) = 0.05
  REQUIRE(chi_square_sf(3.841458820694124, 1.0) ==
          Catch::Approx(0.05).epsilon(1e-9));
  // 10 dof: P(X > 18.307) = 0.05
  REQUIRE(chi_square_sf(18.30703805327515, 10.0) ==
          Catch::Approx(0.05).epsilon(1e-9));
  REQUIRE(chi_square_sf(0.0, 5.0) == Catch::Approx(1.0));
}

TEST_CASE("kolmogorov tail values") {
  // reference values from an independent implementation of the series
  REQUIRE(kolmogorov_sf(1.3580986393225507) == Catch::Approx(0.05).epsilon(1e-9));
  REQUIRE(kolmogorov_sf(1.2) == Catch::Approx(0.1122496666707250).epsilon(1e-9));
  REQUIRE(kolmogorov_sf(0.2) == Catch::Approx(1.0).epsilon(1e-6));
  REQUIRE(kolmogorov_sf(3.0) < 1e-7);
}

TEST_CASE("bessel K0 against reference values") {
  // reference values (Abramowitz & Stegun tables)
  REQUIRE(bessel_k0(0.1) == Catch::Approx(2.4270690247020166).epsilon(2e-7));
  REQUIRE(bessel_k0(1.0) == Catch::Approx(0.4210244382407084).epsilon(2e-7));
  REQUIRE(bessel_k0(2.0) == Catch::Approx(0.1138938727495334).epsilon(2e-7));
  REQUIRE(bessel_k0(5.0) == Catch::Approx(0.003691098334042594).epsilon(2e-7));
  REQUIRE(bessel_k0(10.0) == Catch::Approx(1.778006231616765e-05).epsilon(2e-7));
}
