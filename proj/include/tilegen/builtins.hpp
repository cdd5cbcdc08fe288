// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <numbers>

#include "tilegen/density.hpp"
#include "tilegen/special.hpp"

namespace tilegen {

inline DensityModel builtin_uniform(double a = 0.0, double b = 1.0) {
  const double h = 1.0 / (b - a);
  return DensityModel::from_function([h](double) { return h; }, {a, b},
                                     "uniform");
}

inline DensityModel builtin_gaussian(double mu = 0.0, double sigma = 1.0,
                                     double a = -6.0, double b = 6.0) {
  if (!(sigma > 0.0)) throw ParameterError("gaussian sigma must be > 0");
  const double inv = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
  return DensityModel::from_function(
      [mu, sigma, inv](double x) {
        const double z = (x - mu) / sigma;
        return inv * std::exp(-0.5 * z * z);
      },
      {a, b}, "gaussian");
}

inline DensityModel builtin_exponential(double lambda = 1.0, double a = 0.0,
                                        double b = 10.0) {
  if (!(lambda > 0.0)) throw ParameterError("exponential rate must be > 0");
  return DensityModel::from_function(
      [lambda](double x) { return lambda * std::exp(-lambda * x); }, {a, b},
      "exponential");
}

// Symmetric Levy alpha=1: Cauchy with scale gamma.
inline DensityModel builtin_cauchy(double gamma = 1.0, double a = -64.0,
                                   double b = 64.0) {
  if (!(gamma > 0.0)) throw ParameterError("cauchy gamma must be > 0");
  return DensityModel::from_function(
      [gamma](double x) {
        const double z = x / gamma;
        return 1.0 / (std::numbers::pi * gamma * (1.0 + z * z));
      },
      {a, b}, "cauchy");
}

// K0(|x|)/pi: the density of a product of two independent standard normals.
// Diverges at x=0; the caller must declare a mass point there before tiling.
inline DensityModel builtin_bessel_k0(double a = -15.0, double b = 15.0) {
  return DensityModel::from_function(
      [](double x) {
        const double ax = std::abs(x);
        if (ax == 0.0) return std::numeric_limits<double>::infinity();
        return bessel_k0(ax) / std::numbers::pi;
      },
      {a, b}, "bessel-k0");
}

// Same density with every raw evaluation slowed by a calibrated busy loop;
// used to measure evaluation-cost independence of the production rate.
inline DensityModel make_slowed(const DensityModel& inner, double factor) {
  if (!(factor >= 1.0)) throw ParameterError("slow factor must be >= 1");
  DensityModel base = inner;  // snapshot (shares tabular storage)
  const auto iters = std::uint64_t(factor * 10.0);
  auto slow = [base, iters](double x) {
    volatile double sink = 0.0;
    for (std::uint64_t i = 0; i < iters; ++i) sink = sink + 1e-9;
    (void)sink;
    return base.raw(x);
  };
  auto sup = inner.support();
  DensityModel m = DensityModel::from_function(slow, sup, inner.name() + "-slowed");
  for (const auto& mp : inner.mass_points()) m = m.declare_mass_point(mp.c, mp.epsilon);
  return m;
}

}  // namespace tilegen
