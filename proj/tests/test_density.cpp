// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "tilegen/builtins.hpp"
#include "tilegen/density.hpp"
#include "tilegen/urng.hpp"

using namespace tilegen;

TEST_CASE("uniform builtin evaluates to 1 on [0,1]") {
  auto m = builtin_uniform(0.0, 1.0);
  REQUIRE(m.eval(0.3) == 1.0);
  REQUIRE(m.eval(0.0) == 1.0);
  REQUIRE(m.eval(1.0) == 1.0);
}

TEST_CASE("cauchy builtin peak value is 1/pi") {
  auto m = builtin_cauchy(1.0, -64.0, 64.0);
  REQUIRE(m.eval(0.0) == Catch::Approx(1.0 / std::numbers::pi).epsilon(1e-12));
  REQUIRE(m.eval(1.0) ==
          Catch::Approx(1.0 / (2.0 * std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("eval counts every call exactly once") {
  auto m = builtin_uniform();
  const auto before = m.eval_count();
  for (int i = 0; i < 37; ++i) m.eval(0.5);
  REQUIRE(m.eval_count() - before == 37);
}

TEST_CASE("eval rejects out-of-support points") {
  auto m = builtin_uniform(0.0, 1.0);
  REQUIRE_THROWS_AS(m.eval(1.5), DomainError);
  REQUIRE_THROWS_AS(m.eval(-0.1), DomainError);
}

TEST_CASE("non-finite density surfaces NonFiniteDensity") {
  auto m = builtin_bessel_k0();
  REQUIRE_THROWS_AS(m.eval(0.0), NonFiniteDensity);
  REQUIRE(m.eval(1.0) ==
          Catch::Approx(bessel_k0(1.0) / std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("from_table: uniform and linear midpoint") {
  auto uni = DensityModel::from_table({{0.0, 1.0}, {1.0, 1.0}});
  REQUIRE(uni.eval(0.5) == 1.0);

  auto ramp = DensityModel::from_table({{0.0, 0.0}, {1.0, 2.0}});
  REQUIRE(ramp.eval(0.5) == Catch::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("from_table validation") {
  REQUIRE_THROWS_AS(DensityModel::from_table({{0.0, 1.0}}), InvalidTable);
  REQUIRE_THROWS_AS(DensityModel::from_table({{1.0, 1.0}, {0.0, 1.0}}),
                    InvalidTable);
  REQUIRE_THROWS_AS(DensityModel::from_table({{0.0, -1.0}, {1.0, 1.0}}),
                    InvalidTable);
  REQUIRE_THROWS_AS(DensityModel::from_table({{0.5, 1.0}, {0.5, 2.0}}),
                    InvalidTable);
}

TEST_CASE("near-coincident points model a jump") {
  auto m = DensityModel::from_table(
      {{0.0, 0.1}, {0.5, 0.1}, {0.5 + 1e-12, 0.9}, {1.0, 0.9}});
  REQUIRE(m.eval(0.25) == Catch::Approx(0.1));
  REQUIRE(m.eval(0.75) == Catch::Approx(0.9));
}

TEST_CASE("polynomial interpolation clamps negative overshoot") {
  // an impulse-like table drives a 7-point polynomial below zero nearby
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i <= 16; ++i) pts.push_back({double(i), i == 8 ? 1.0 : 0.0});
  auto m = DensityModel::from_table(std::move(pts), Interpolation::polynomial);
  bool never_negative = true;
  for (double x = 0.0; x <= 16.0; x += 0.01)
    if (m.eval(x) < 0.0) never_negative = false;
  REQUIRE(never_negative);
}

TEST_CASE("declare_mass_point: constant density keeps its height") {
  auto m = builtin_uniform(0.0, 1.0).declare_mass_point(0.5, 0.01);
  REQUIRE(m.mass_points().size() == 1);
  REQUIRE(m.mass_points()[0].plateau == Catch::Approx(1.0).epsilon(1e-9));
  REQUIRE(m.eval(0.5) == Catch::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("declare_mass_point: inverse square-root pole") {
  const double c = 0.5, eps = 1e-4;
  auto m = DensityModel::from_function(
                [c](double x) { return 1.0 / std::sqrt(std::abs(x - c)); },
                {0.0, 1.0})
               .declare_mass_point(c, eps);
  // closed-form antiderivative: plateau = (1/2eps) * 4 sqrt(eps) = 2/sqrt(eps)
  REQUIRE(m.mass_points()[0].plateau ==
          Catch::Approx(2.0 / std::sqrt(eps)).epsilon(1e-5));
}

TEST_CASE("declare_mass_point preserves mass") {
  const double c = 0.5, eps = 1e-3;
  auto raw = DensityModel::from_function(
      [c](double x) { return 1.0 / std::sqrt(std::abs(x - c) + 1e-30); },
      {0.0, 1.0});
  auto m = raw.declare_mass_point(c, eps);
  const double plateau_mass = m.mass_points()[0].plateau * 2.0 * eps;
  const double raw_mass = 4.0 * std::sqrt(eps);  // analytic
  REQUIRE(plateau_mass == Catch::Approx(raw_mass).epsilon(1e-6));
  // and integral() of the modified density sees the plateau
  REQUIRE(m.integral(c - eps, c + eps) ==
          Catch::Approx(plateau_mass).epsilon(1e-12));
}

TEST_CASE("declare_mass_point validation") {
  auto m = builtin_uniform(0.0, 1.0);
  REQUIRE_THROWS_AS(m.declare_mass_point(0.0, 0.1), DomainError);
  REQUIRE_THROWS_AS(m.declare_mass_point(0.5, 0.0), DomainError);
  auto one = m.declare_mass_point(0.5, 0.01);
  REQUIRE_THROWS_AS(one.declare_mass_point(0.505, 0.01), DomainError);
}

TEST_CASE("integral: basic masses") {
  REQUIRE(builtin_uniform(0.0, 1.0).integral(0.0, 1.0) ==
          Catch::Approx(1.0).epsilon(1e-12));
  auto twice = DensityModel::from_function([](double) { return 2.0; }, {0.0, 1.0});
  REQUIRE(twice.integral(0.0, 1.0) == Catch::Approx(2.0).epsilon(1e-12));
  auto g = builtin_gaussian(0.0, 1.0, -6.0, 6.0);
  REQUIRE(g.integral(-6.0, 6.0) ==
          Catch::Approx(std::erf(6.0 / std::sqrt(2.0))).epsilon(1e-9));
}

TEST_CASE("profile: uniform on [0,1] with 4 columns") {
  auto g = builtin_uniform(0.0, 1.0).profile(4);
  REQUIRE(g.n_columns == 4);
  for (std::size_t j = 0; j < 4; ++j) {
    REQUIRE(g.f_lo[j] == 1.0);
    REQUIRE(g.f_hi[j] == 1.0);
    REQUIRE(g.col_integral[j] == Catch::Approx(0.25).epsilon(1e-14));
  }
  REQUIRE(g.total_integral == Catch::Approx(1.0).epsilon(1e-14));
  REQUIRE(g.global_max == 1.0);
}

TEST_CASE("profile: linear density column integrals") {
  auto m = DensityModel::from_function([](double x) { return 2.0 * x; },
                                       {0.0, 1.0});
  auto g = m.profile(2, 33);
  REQUIRE(g.col_integral[0] == Catch::Approx(0.25).margin(1e-6));
  REQUIRE(g.col_integral[1] == Catch::Approx(0.75).margin(1e-6));
}

TEST_CASE("profile: cauchy total mass on [-64,64]") {
  auto m = builtin_cauchy(1.0, -64.0, 64.0);
  auto g = m.profile(1u << 14);
  const double expected = 2.0 * std::atan(64.0) / std::numbers::pi;
  REQUIRE(g.total_integral == Catch::Approx(expected).margin(1e-5));
}

TEST_CASE("profile eval-count accounting for sampled models") {
  auto m = builtin_gaussian();
  const auto before = m.eval_count();
  m.profile(16, 3);
  // documented formula: n_columns * (samples_per_column - 1) + 1
  REQUIRE(m.eval_count() - before == 16 * 2 + 1);
}

TEST_CASE("profile soundness: random probes stay inside column bounds") {
  auto m = builtin_gaussian(0.0, 1.0, -6.0, 6.0);
  auto g = m.profile(64);
  UniformSource src(123);
  for (int i = 0; i < 10'000; ++i) {
    const double x = -6.0 + 12.0 * src.unit_real();
    const double v = m.raw(x);
    const auto j = g.column_of(x);
    REQUIRE(v >= g.f_lo[j] - 1e-12);
    REQUIRE(v <= g.f_hi[j] + 1e-12);
  }
}

TEST_CASE("profile scale invariance") {
  auto base = builtin_gaussian(0.0, 1.0, -6.0, 6.0);
  const double k = 3.5;
  auto scaled = DensityModel::from_function(
      [k](double x) {
        const double inv = 1.0 / std::sqrt(2.0 * std::numbers::pi);
        return k * inv * std::exp(-0.5 * x * x);
      },
      {-6.0, 6.0});
  auto g0 = base.profile(32);
  auto g1 = scaled.profile(32);
  for (std::size_t j = 0; j < 32; ++j) {
    REQUIRE(g1.f_lo[j] == Catch::Approx(k * g0.f_lo[j]).epsilon(1e-12));
    REQUIRE(g1.f_hi[j] == Catch::Approx(k * g0.f_hi[j]).epsilon(1e-12));
    REQUIRE(g1.col_integral[j] ==
            Catch::Approx(k * g0.col_integral[j]).epsilon(1e-12));
  }
}

TEST_CASE("tabular profile is exact for piecewise linear densities") {
  // node inside a column: sampled profiling would miss the spike
  auto m = DensityModel::from_table(
      {{0.0, 0.0}, {0.3, 5.0}, {0.6, 0.2}, {1.0, 0.1}});
  auto g = m.profile(2);
  REQUIRE(g.f_hi[0] == 5.0);  // spike at 0.3 sits inside column 0
  REQUIRE(g.f_lo[0] == 0.0);
  REQUIRE(g.global_max == 5.0);
  // exact integral of the interpolant
  const double exact = 0.5 * (0.0 + 5.0) * 0.3 + 0.5 * (5.0 + 0.2) * 0.3 +
                       0.5 * (0.2 + 0.1) * 0.4;
  REQUIRE(g.total_integral == Catch::Approx(exact).epsilon(1e-12));
  REQUIRE(m.integral(0.0, 1.0) == Catch::Approx(exact).epsilon(1e-12));
}
