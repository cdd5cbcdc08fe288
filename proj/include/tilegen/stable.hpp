// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "tilegen/density.hpp"
#include "tilegen/errors.hpp"
#include "tilegen/fft.hpp"
#include "tilegen/quadrature.hpp"

namespace tilegen {

// Alpha-stable parameters in Nolan's S0 (continuous-in-parameters)
// convention: alpha stability, beta skewness, gamma scale, delta location.
struct StableParams {
  double alpha = 2.0;
  double beta = 0.0;
  double gamma = 1.0;
  double delta = 0.0;

  void validate() const {
    if (!(alpha > 0.0) || alpha > 2.0)
      throw ParameterError("stable alpha must be in (0,2]");
    if (beta < -1.0 || beta > 1.0)
      throw ParameterError("stable beta must be in [-1,1]");
    if (!(gamma > 0.0)) throw ParameterError("stable gamma must be > 0");
    if (!std::isfinite(delta)) throw ParameterError("stable delta must be finite");
  }
};

// S0 characteristic function (Nolan 1997/1999 convention):
//   alpha != 1: exp(i delta q - (gamma|q|)^a [1 + i beta tan(pi a/2) sgn(q)
//                                             ((gamma|q|)^{1-a} - 1)])
//   alpha == 1: exp(i delta q - gamma|q| [1 + i beta (2/pi) sgn(q)
//                                         log(gamma|q|)])
inline std::complex<double> stable_cf_s0(double q, const StableParams& p) {
  const double aq = p.gamma * std::abs(q);
  if (aq == 0.0) return {1.0, 0.0};
  const double sgn = q > 0.0 ? 1.0 : -1.0;
  double re, im;
  if (std::abs(p.alpha - 1.0) < 1e-12) {
    re = -aq;
    im = -aq * p.beta * (2.0 / std::numbers::pi) * sgn * std::log(aq);
  } else {
    const double aqa = std::pow(aq, p.alpha);
    const double t = std::tan(0.5 * std::numbers::pi * p.alpha);
    re = -aqa;
    // (aq)^alpha * ((aq)^{1-alpha} - 1) = aq - (aq)^alpha, evaluated stably
    im = -p.beta * t * sgn * (aq - aqa);
  }
  im += p.delta * q;
  return std::exp(re) * std::complex<double>(std::cos(im), std::sin(im));
}

// Chambers et al. (1976) transformation for symmetric alpha-stable variates:
//   xi = gamma ((-log u1 cos phi)/cos((1-alpha) phi))^{1-1/alpha}
//        sin(alpha phi)/cos(phi),  phi = pi (u2 - 1/2).
// Near alpha=1 the exponent vanishes; the exact Cauchy branch xi=gamma tan(phi)
// is used for |alpha-1| < 1e-4 to avoid the ill-conditioned power.
inline double chambers_symmetric(const StableParams& p, double u1, double u2) {
  p.validate();
  if (p.beta != 0.0)
    throw ParameterError("chambers_symmetric requires beta = 0");
  if (!(u1 > 0.0 && u1 < 1.0 && u2 > 0.0 && u2 < 1.0))
    throw DomainError("chambers_symmetric: u1, u2 must be in (0,1)");
  const double phi = std::numbers::pi * (u2 - 0.5);
  if (std::abs(p.alpha - 1.0) < 1e-4) return p.gamma * std::tan(phi);
  const double w = -std::log(u1);
  const double num = w * std::cos(phi);
  const double den = std::cos((1.0 - p.alpha) * phi);
  const double expo = 1.0 - 1.0 / p.alpha;
  return p.gamma * std::exp(expo * std::log(num / den)) *
         (std::sin(p.alpha * phi) / std::cos(phi));
}

// Pointwise symmetric Levy density (beta = 0):
//   L(z; alpha, gamma) = (1/pi) Int_0^inf exp(-(gamma q)^alpha) cos(q z) dq.
// Integrated segment-by-segment between consecutive zeros of cos(qz); the
// alternating segment tail is accelerated by iterated Euler averaging.
inline double symmetric_levy_pdf(double z, double alpha, double gamma) {
  StableParams p{alpha, 0.0, gamma, 0.0};
  p.validate();
  z = std::abs(z);
  const double abs_tol = 1e-10;

  auto integrand = [&](double q) {
    return std::exp(-std::pow(gamma * q, alpha)) * std::cos(q * z);
  };
  QuadratureOptions qo;
  qo.rel_tol = 1e-12;

  // decay horizon: (gamma q)^alpha >= 40 kills the envelope
  const double q_decay = std::pow(40.0, 1.0 / alpha) / gamma;

  if (z * q_decay < 0.5 * std::numbers::pi) {
    // no sign change before the envelope dies; single quadrature
    return integrate(integrand, 0.0, q_decay, qo) / std::numbers::pi;
  }

  // segment ends at zeros of cos(qz): q_k = (pi/2 + k pi)/z
  double sum = 0.0;
  double prev = 0.0;
  std::vector<double> partial;
  const int max_segments = 100000;
  int k = 0;
  for (; k < max_segments; ++k) {
    const double q1 = (0.5 + double(k)) * std::numbers::pi / z;
    const double seg = integrate(integrand, prev, q1, qo);
    sum += seg;
    prev = q1;
    if (q1 > q_decay && std::abs(seg) < abs_tol * 0.01)
      return sum / std::numbers::pi;
    partial.push_back(sum);
    if (partial.size() >= 40 && q1 > 3.0 / gamma) {
      // iterated Euler averaging of the alternating tail
      std::vector<double> avg(partial.end() - 20, partial.end());
      for (std::size_t lvl = 1; lvl < avg.size(); ++lvl)
        for (std::size_t i = 0; i + lvl < avg.size(); ++i)
          avg[i] = 0.5 * (avg[i] + avg[i + 1]);
      const double accel = avg[0];
      // trust acceleration once consecutive estimates agree
      std::vector<double> avg2(partial.end() - 21, partial.end() - 1);
      for (std::size_t lvl = 1; lvl < avg2.size(); ++lvl)
        for (std::size_t i = 0; i + lvl < avg2.size(); ++i)
          avg2[i] = 0.5 * (avg2[i] + avg2[i + 1]);
      if (std::abs(accel - avg2[0]) < abs_tol * 0.1)
        return accel / std::numbers::pi;
    }
  }
  throw QuadratureFailure("symmetric_levy_pdf: oscillatory tail did not converge");
}

namespace detail {

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace detail

// Density values of the S0 stable law on an n_points inclusive uniform grid
// over [a,b], by discrete Fourier inversion of the characteristic function.
// The transform runs on a power-of-two grid with spacing h/2 padded to at
// least pad_factor times the requested window, so periodization aliasing of
// the fat tails stays below ~1e-6 of the density (the only discretization
// error; rounding aside, the DFT inversion equals the periodized density).
inline TabularDensity levy_pdf_grid(const StableParams& p, std::size_t n_points,
                                    Interval support, int pad_factor = 33) {
  p.validate();
  if (n_points < (1u << 8)) throw ParameterError("levy_pdf_grid: n_points >= 256");
  if ((n_points & (n_points - 1)) != 0)
    throw ParameterError("levy_pdf_grid: n_points must be a power of two");
  if (!(support.lo < support.hi))
    throw ParameterError("levy_pdf_grid: invalid support");

  const double a = support.lo;
  const double b = support.hi;
  const double h = (b - a) / double(n_points - 1);
  const double hf = 0.5 * h;  // transform grid spacing
  const std::size_t M =
      detail::next_pow2(std::size_t(pad_factor) * (n_points - 1) * 2);
  const double L = double(M) * hf;
  const double c = 0.5 * (a + b);
  const double x0 = c - 0.5 * L;
  const double dq = 2.0 * std::numbers::pi / L;

  std::vector<std::complex<double>> buf(M);
  for (std::size_t m = 0; m < M; ++m) {
    const double fm = (m <= M / 2) ? double(m) : double(m) - double(M);
    const double q = fm * dq;
    buf[m] = stable_cf_s0(q, p) *
             std::exp(std::complex<double>(0.0, -q * x0));
  }
  fft_forward(buf);

  // x0 + k0*hf == a, and the inclusive grid advances by 2 transform steps
  const std::size_t k0 = std::size_t(std::llround((a - x0) / hf));
  std::vector<double> xs(n_points), fs(n_points);
  for (std::size_t j = 0; j < n_points; ++j) {
    xs[j] = a + double(j) * h;
    const double v = buf[k0 + 2 * j].real() * dq / (2.0 * std::numbers::pi);
    fs[j] = v < 0.0 ? 0.0 : v;
  }
  xs.front() = a;
  xs.back() = b;
  return TabularDensity::from_points(std::move(xs), std::move(fs),
                                     Interpolation::linear);
}

// The bimodal composite of the two-piece benchmark density: an asymmetric
// alpha=1 stable piece left of the seam at x=10, a unit-width Gaussian hump
// centered at 13 to its right, rescaled so both take the same value at the
// seam. Support [-5, 25].
inline TabularDensity bimodal_fig2(std::size_t n_points = 1u << 15) {
  const Interval support{-5.0, 25.0};
  const double seam = 10.0;
  const double mean = 13.0;
  StableParams left{1.0, 0.7, 1.0, 0.0};
  TabularDensity lg = levy_pdf_grid(left, n_points, support);

  auto gauss = [mean](double x) {
    return std::exp(-0.5 * (x - mean) * (x - mean)) /
           std::sqrt(2.0 * std::numbers::pi);
  };
  // left value at the seam from the grid interpolant, matching the tiled model
  const double k = lg.value(seam) / gauss(seam);
  for (std::size_t j = 0; j < lg.xs.size(); ++j)
    if (lg.xs[j] > seam) lg.fs[j] = k * gauss(lg.xs[j]);
  return lg;
}

}  // namespace tilegen
