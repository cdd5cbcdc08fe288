// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>

#include "tilegen/errors.hpp"

namespace tilegen {

struct QuadratureOptions {
  double rel_tol = 1e-9;
  std::size_t max_intervals = 1'000'000;
  // When the integrand is non-finite exactly at an endpoint of the requested
  // range (integrable singularity), evaluate this far inside instead.
  bool nudge_singular_endpoints = false;
};

namespace detail {

struct SimpsonCtx {
  const std::function<double(double)>& f;
  double abs_tol;
  std::size_t budget;
  std::size_t used = 0;
};

inline double simpson_panel(double fa, double fm, double fb, double h) {
  return (fa + 4.0 * fm + fb) * (h / 6.0);
}

inline double adaptive_simpson_rec(SimpsonCtx& ctx, double a, double b,
                                   double fa, double fm, double fb,
                                   double whole, double tol, int depth) {
  if (++ctx.used > ctx.budget)
    throw QuadratureFailure("adaptive quadrature exceeded interval budget");
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = ctx.f(lm);
  const double frm = ctx.f(rm);
  if (!std::isfinite(flm) || !std::isfinite(frm))
    throw QuadratureFailure("non-finite integrand inside quadrature range");
  const double left = simpson_panel(fa, flm, fm, m - a);
  const double right = simpson_panel(fm, frm, fb, b - m);
  const double delta = left + right - whole;
  const bool interval_exhausted = (b - a) < 1e-14 * (std::abs(m) + 1.0);
  if (depth > 0 && (std::abs(delta) <= 15.0 * tol || interval_exhausted))
    return left + right + delta / 15.0;
  return adaptive_simpson_rec(ctx, a, m, fa, flm, fm, left, 0.5 * tol,
                              depth + 1) +
         adaptive_simpson_rec(ctx, m, b, fm, frm, fb, right, 0.5 * tol,
                              depth + 1);
}

}  // namespace detail

// Adaptive Simpson with interval bisection. The tolerance is relative to a
// coarse magnitude estimate of the integral; hard cap on subinterval count.
inline double integrate(const std::function<double(double)>& f, double lo,
                        double hi, const QuadratureOptions& opts = {}) {
  if (!(lo <= hi)) throw DomainError("integrate: lo > hi");
  if (lo == hi) return 0.0;

  std::function<double(double)> eval = [&f, lo, hi, &opts](double x) {
    double v = f(x);
    if (!std::isfinite(v) && opts.nudge_singular_endpoints &&
        (x == lo || x == hi)) {
      const double nudge = (hi - lo) * 1e-12;
      v = f(x == lo ? lo + nudge : hi - nudge);
    }
    return v;
  };

  // magnitude estimate on a fixed coarse grid, for scaling the tolerance
  const int kCoarse = 32;
  double scale = 0.0;
  const double h = (hi - lo) / kCoarse;
  for (int i = 0; i <= kCoarse; ++i) {
    double v = eval(lo + i * h);
    if (std::isfinite(v)) scale += std::abs(v) * h;
  }
  if (!(scale > 0.0)) scale = 1.0;

  const double fa = eval(lo);
  const double fb = eval(hi);
  const double fm = eval(0.5 * (lo + hi));
  if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm))
    throw QuadratureFailure("non-finite integrand at quadrature nodes");

  detail::SimpsonCtx ctx{eval, opts.rel_tol * scale, opts.max_intervals};
  const double whole = detail::simpson_panel(fa, fm, fb, hi - lo);
  return detail::adaptive_simpson_rec(ctx, lo, hi, fa, fm, fb, whole,
                                      ctx.abs_tol, 0);
}

}  // namespace tilegen
