// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>

#include "tilegen/errors.hpp"

namespace tilegen {

// Modified Bessel functions I0 and K0 via the classic Abramowitz & Stegun
// polynomial fits (9.8.1, 9.8.5-9.8.7), series for |x| <= 2 and asymptotic
// form beyond. Absolute error below 2e-7 everywhere, which is far inside
// every tolerance that consumes them here.

inline double bessel_i0(double x) {
  const double ax = std::abs(x);
  if (ax <= 3.75) {
    const double t = (x / 3.75) * (x / 3.75);
    return 1.0 +
           t * (3.5156229 +
                t * (3.0899424 +
                     t * (1.2067492 +
                          t * (0.2659732 + t * (0.0360768 + t * 0.0045813)))));
  }
  const double t = 3.75 / ax;
  const double p =
      0.39894228 +
      t * (0.01328592 +
           t * (0.00225319 +
                t * (-0.00157565 +
                     t * (0.00916281 +
                          t * (-0.02057706 +
                               t * (0.02635537 +
                                    t * (-0.01647633 + t * 0.00392377)))))));
  return p * std::exp(ax) / std::sqrt(ax);
}

inline double bessel_k0(double x) {
  if (!(x > 0.0)) {
    if (x == 0.0) return std::numeric_limits<double>::infinity();
    throw DomainError("bessel_k0: x must be positive");
  }
  if (x <= 2.0) {
    const double t = x * x / 4.0;
    const double p =
        -0.57721566 +
        t * (0.42278420 +
             t * (0.23069756 +
                  t * (0.03488590 +
                       t * (0.00262698 + t * (0.00010750 + t * 0.0000074)))));
    return -std::log(x / 2.0) * bessel_i0(x) + p;
  }
  const double t = 2.0 / x;
  const double p =
      1.25331414 +
      t * (-0.07832358 +
           t * (0.02189568 +
                t * (-0.01062446 +
                     t * (0.00587872 + t * (-0.00251540 + t * 0.00053208)))));
  return p * std::exp(-x) / std::sqrt(x);
}

// Regularized incomplete gamma Q(a,x) = 1 - P(a,x), series / continued
// fraction split at x = a+1. Used for chi-square tail probabilities.
namespace detail {

inline double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-15)
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw InternalError("incomplete gamma series failed to converge");
}

inline double gamma_q_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -double(i) * (double(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15)
      return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw InternalError("incomplete gamma continued fraction failed to converge");
}

}  // namespace detail

inline double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw DomainError("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_contfrac(a, x);
}

// Chi-square survival function with k degrees of freedom.
inline double chi_square_sf(double x, double k) {
  return gamma_q(0.5 * k, 0.5 * x);
}

// Kolmogorov distribution tail Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} e^{-2 j^2 lambda^2}.
inline double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 200; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  double q = 2.0 * sum;
  if (q < 0.0) q = 0.0;
  if (q > 1.0) q = 1.0;
  return q;
}

// Standard normal CDF.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace tilegen
