// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tilegen/errors.hpp"
#include "tilegen/quadrature.hpp"

namespace tilegen {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

enum class Interpolation { linear, polynomial };

// Tabular density: ordered (x, f) pairs with linear or local polynomial
// interpolation. Interpolated values are clamped to >= 0 (polynomial
// interpolation may overshoot below zero near steep features).
struct TabularDensity {
  std::vector<double> xs;
  std::vector<double> fs;
  Interpolation interp = Interpolation::linear;
  int poly_points = 7;

  // uniform-spacing fast path, detected at construction
  bool uniform_grid = false;
  double grid_step = 0.0;

  static TabularDensity from_points(std::vector<double> x, std::vector<double> f,
                                    Interpolation interp = Interpolation::linear,
                                    int poly_points = 7) {
    if (x.size() != f.size() || x.size() < 2)
      throw InvalidTable("tabular density needs at least 2 points");
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!std::isfinite(x[i]) || !std::isfinite(f[i]))
        throw InvalidTable("tabular density has non-finite entries");
      if (f[i] < 0.0) throw InvalidTable("tabular density has negative values");
      if (i > 0) {
        if (!(x[i] > x[i - 1]))
          throw InvalidTable("tabular x values must be strictly increasing");
        // jumps are modeled by near-coincident points, but points closer
        // than 4 ulps are rejected
        double gap = x[i] - x[i - 1];
        double ulp = std::max(std::abs(x[i]) * std::numeric_limits<double>::epsilon(),
                              std::numeric_limits<double>::denorm_min());
        if (gap < 4.0 * ulp)
          throw InvalidTable("tabular x values closer than 4 ulps");
      }
    }
    TabularDensity t;
    t.xs = std::move(x);
    t.fs = std::move(f);
    t.interp = interp;
    t.poly_points = std::max(2, poly_points);
    const double span = t.xs.back() - t.xs.front();
    const double step = span / double(t.xs.size() - 1);
    t.uniform_grid = true;
    for (std::size_t i = 0; i < t.xs.size(); ++i) {
      if (std::abs(t.xs[i] - (t.xs.front() + double(i) * step)) >
          1e-9 * std::max(1.0, std::abs(span))) {
        t.uniform_grid = false;
        break;
      }
    }
    t.grid_step = step;
    return t;
  }

  std::size_t segment_of(double x) const {
    if (uniform_grid) {
      double u = (x - xs.front()) / grid_step;
      if (u < 0.0) u = 0.0;
      auto i = std::size_t(u);
      if (i >= xs.size() - 1) i = xs.size() - 2;
      // uniform detection tolerates 1e-9 relative wobble; nudge if needed
      while (i > 0 && x < xs[i]) --i;
      while (i + 2 < xs.size() && x > xs[i + 1]) ++i;
      return i;
    }
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t i = it == xs.begin() ? 0 : std::size_t(it - xs.begin()) - 1;
    if (i >= xs.size() - 1) i = xs.size() - 2;
    return i;
  }

  double value(double x) const {
    const std::size_t i = segment_of(x);
    if (interp == Interpolation::linear) {
      const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
      const double v = fs[i] + t * (fs[i + 1] - fs[i]);
      return v < 0.0 ? 0.0 : v;
    }
    // local polynomial through poly_points nearest nodes (Neville)
    const int m = std::min<int>(poly_points, int(xs.size()));
    std::ptrdiff_t lo = std::ptrdiff_t(i) - (m - 1) / 2;
    lo = std::clamp<std::ptrdiff_t>(lo, 0, std::ptrdiff_t(xs.size()) - m);
    double p[16];
    double px[16];
    for (int k = 0; k < m; ++k) {
      p[k] = fs[std::size_t(lo) + std::size_t(k)];
      px[k] = xs[std::size_t(lo) + std::size_t(k)];
    }
    for (int lvl = 1; lvl < m; ++lvl)
      for (int k = 0; k < m - lvl; ++k)
        p[k] = ((x - px[k + lvl]) * p[k] + (px[k] - x) * p[k + 1]) /
               (px[k] - px[k + lvl]);
    return p[0] < 0.0 ? 0.0 : p[0];
  }
};

// Pole/cusp replacement: on [c-eps, c+eps] the density is a plateau holding
// the interval's total mass (equal-area condition).
struct MassPointSpec {
  double c = 0.0;
  double epsilon = 0.0;
  double plateau = 0.0;
  bool contains(double x) const { return std::abs(x - c) <= epsilon; }
};

// Per-column evidence used by the tiler: lower/upper bounds of f and the
// column integral, over n equal-width columns.
struct GridProfile {
  double a = 0.0;
  double b = 1.0;
  std::size_t n_columns = 0;
  std::vector<double> f_lo;
  std::vector<double> f_hi;
  std::vector<double> col_integral;
  double total_integral = 0.0;
  double global_max = 0.0;

  std::size_t column_of(double x) const {
    double u = (x - a) / (b - a) * double(n_columns);
    auto j = u <= 0.0 ? std::size_t(0) : std::size_t(u);
    return j >= n_columns ? n_columns - 1 : j;
  }
};

// Target density f(x) on finite support [a,b]: closed form or tabular,
// optionally modified near declared poles/jumps. Immutable once built except
// for the evaluation counter.
class DensityModel {
 public:
  static DensityModel from_function(std::function<double(double)> f,
                                    Interval support, std::string name = {}) {
    if (!(support.lo < support.hi) || !std::isfinite(support.lo) ||
        !std::isfinite(support.hi))
      throw DomainError("density support must be finite with a < b");
    DensityModel m;
    m.support_ = support;
    m.fn_ = std::move(f);
    m.name_ = std::move(name);
    return m;
  }

  static DensityModel from_tabular(const TabularDensity& table,
                                   std::string name = {}) {
    DensityModel m;
    m.support_ = {table.xs.front(), table.xs.back()};
    m.table_ = std::make_shared<TabularDensity>(table);
    m.name_ = std::move(name);
    return m;
  }

  static DensityModel from_table(std::vector<std::pair<double, double>> pts,
                                 Interpolation interp = Interpolation::linear) {
    std::vector<double> x, f;
    x.reserve(pts.size());
    f.reserve(pts.size());
    for (auto& [xx, ff] : pts) {
      x.push_back(xx);
      f.push_back(ff);
    }
    return from_tabular(
        TabularDensity::from_points(std::move(x), std::move(f), interp));
  }

  DensityModel(const DensityModel& o)
      : support_(o.support_),
        fn_(o.fn_),
        table_(o.table_),
        mass_points_(o.mass_points_),
        name_(o.name_),
        eval_count_(o.eval_count_.load(std::memory_order_relaxed)) {}
  DensityModel& operator=(const DensityModel& o) {
    support_ = o.support_;
    fn_ = o.fn_;
    table_ = o.table_;
    mass_points_ = o.mass_points_;
    name_ = o.name_;
    eval_count_.store(o.eval_count_.load(std::memory_order_relaxed),
                      std::memory_order_relaxed);
    return *this;
  }
  DensityModel() = default;

  Interval support() const { return support_; }
  const std::string& name() const { return name_; }
  bool is_tabular() const { return table_ != nullptr; }
  bool is_tabular_linear() const {
    return table_ && table_->interp == Interpolation::linear;
  }
  const TabularDensity* table() const { return table_.get(); }
  const std::vector<MassPointSpec>& mass_points() const { return mass_points_; }
  std::uint64_t eval_count() const {
    return eval_count_.load(std::memory_order_relaxed);
  }

  // f-bar: plateau inside declared mass intervals, raw density elsewhere.
  // Increments the evaluation counter exactly once per call.
  // Raw density value: no mass-point modification, no counting.
  double raw(double x) const { return raw_value(x); }

  double eval(double x) const {
    x = clamp_to_support(x);
    eval_count_.fetch_add(1, std::memory_order_relaxed);
    for (const auto& mp : mass_points_)
      if (mp.contains(x)) return mp.plateau;
    const double v = raw_value(x);
    if (!std::isfinite(v))
      throw NonFiniteDensity(
          "density is not finite at x=" + std::to_string(x) +
          "; declare a mass point covering the pole");
    if (v < 0.0)
      throw NonFiniteDensity("density is negative at x=" + std::to_string(x));
    return v;
  }

  // Returns a model with the interval [c-eps, c+eps] replaced by the
  // equal-area plateau (1/2eps) * integral of f over the interval.
  DensityModel declare_mass_point(double c, double epsilon) const {
    if (!(epsilon > 0.0)) throw DomainError("mass point epsilon must be > 0");
    if (c - epsilon < support_.lo || c + epsilon > support_.hi)
      throw DomainError("mass point interval must lie inside the support");
    for (const auto& mp : mass_points_)
      if (std::abs(mp.c - c) <= mp.epsilon + epsilon)
        throw DomainError("mass point intervals may not overlap");
    QuadratureOptions opts;
    opts.nudge_singular_endpoints = true;
    auto raw = [this](double x) { return raw_value(x); };
    // split at c so an interior pole sits on quadrature endpoints
    const double mass = integrate(raw, c - epsilon, c, opts) +
                        integrate(raw, c, c + epsilon, opts);
    if (!std::isfinite(mass) || mass < 0.0)
      throw QuadratureFailure("pole integral did not converge");
    DensityModel m(*this);
    m.mass_points_.push_back({c, epsilon, mass / (2.0 * epsilon)});
    std::sort(m.mass_points_.begin(), m.mass_points_.end(),
              [](const MassPointSpec& l, const MassPointSpec& r) { return l.c < r.c; });
    return m;
  }

  // Adaptive quadrature of f-bar over [lo,hi] (exact for linear tabular
  // models). Normalization is never assumed.
  double integral(double lo, double hi, QuadratureOptions opts = {}) const {
    if (!(support_.lo <= lo && hi <= support_.hi && lo <= hi))
      throw DomainError("integral range outside density support");
    if (lo == hi) return 0.0;
    // carve out mass-point plateaus: exact rectangles
    double total = 0.0;
    double cursor = lo;
    for (const auto& mp : mass_points_) {
      const double mlo = mp.c - mp.epsilon;
      const double mhi = mp.c + mp.epsilon;
      if (mhi <= cursor || mlo >= hi) continue;
      if (mlo > cursor) total += raw_integral(cursor, mlo, opts);
      const double plo = std::max(cursor, mlo);
      const double phi = std::min(hi, mhi);
      total += mp.plateau * (phi - plo);
      cursor = phi;
    }
    if (cursor < hi) total += raw_integral(cursor, hi, opts);
    return total;
  }

  // Per-column bounds and integrals at a given resolution. Tabular linear
  // models are profiled exactly (breakpoint walk: extrema of a piecewise
  // linear function sit on nodes and column edges). Closed-form models are
  // sampled with samples_per_column points per column, edges shared, which
  // is exact for densities monotone within each column; the residual risk
  // for oscillatory columns shrinks with samples_per_column.
  // Evaluation cost of the sampled path: n_columns*(samples_per_column-1)+1
  // calls of eval (plus a few per column intersecting a mass interval).
  GridProfile profile(std::size_t n_columns, int samples_per_column = 3) const {
    if (n_columns < 1) throw DomainError("profile needs n_columns >= 1");
    if (samples_per_column < 2) throw DomainError("samples_per_column >= 2");
    GridProfile g;
    g.a = support_.lo;
    g.b = support_.hi;
    g.n_columns = n_columns;
    g.f_lo.resize(n_columns);
    g.f_hi.resize(n_columns);
    g.col_integral.resize(n_columns);
    if (is_tabular_linear())
      profile_tabular_exact(g);
    else
      profile_sampled(g, samples_per_column);
    for (std::size_t j = 0; j < n_columns; ++j) {
      g.total_integral += g.col_integral[j];
      g.global_max = std::max(g.global_max, g.f_hi[j]);
    }
    for (const auto& mp : mass_points_)
      g.global_max = std::max(g.global_max, mp.plateau);
    return g;
  }

 private:
  double clamp_to_support(double x) const {
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() *
                         std::max(std::abs(support_.lo), std::abs(support_.hi));
    if (x < support_.lo) {
      if (x < support_.lo - slack)
        throw DomainError("eval: x below density support");
      return support_.lo;
    }
    if (x > support_.hi) {
      if (x > support_.hi + slack)
        throw DomainError("eval: x above density support");
      return support_.hi;
    }
    return x;
  }

  double raw_value(double x) const {
    return table_ ? table_->value(x) : fn_(x);
  }

  // f-bar without mass plateaus is just the raw density; mass intervals are
  // excluded by the caller.
  double raw_integral(double lo, double hi, const QuadratureOptions& opts) const {
    if (is_tabular_linear()) return tabular_linear_integral(lo, hi);
    auto f = [this](double x) {
      eval_count_.fetch_add(1, std::memory_order_relaxed);
      const double v = raw_value(x);
      if (!std::isfinite(v))
        throw NonFiniteDensity("density is not finite inside integral range");
      return v < 0.0 ? 0.0 : v;
    };
    return integrate(f, lo, hi, opts);
  }

  double tabular_linear_integral(double lo, double hi) const {
    const auto& t = *table_;
    auto lin = [&t](double x) {
      const std::size_t i = t.segment_of(x);
      const double u = (x - t.xs[i]) / (t.xs[i + 1] - t.xs[i]);
      const double v = t.fs[i] + u * (t.fs[i + 1] - t.fs[i]);
      return v < 0.0 ? 0.0 : v;
    };
    const std::size_t i0 = t.segment_of(lo);
    const std::size_t i1 = t.segment_of(hi);
    double acc = 0.0;
    double xprev = lo;
    double fprev = lin(lo);
    for (std::size_t i = i0 + 1; i <= i1; ++i) {
      acc += 0.5 * (fprev + t.fs[i]) * (t.xs[i] - xprev);
      xprev = t.xs[i];
      fprev = t.fs[i];
    }
    acc += 0.5 * (fprev + lin(hi)) * (hi - xprev);
    return acc;
  }

  void profile_tabular_exact(GridProfile& g) const {
    const auto& t = *table_;
    const double w = (g.b - g.a) / double(g.n_columns);
    // breakpoints inside a column: table nodes, mass-interval edges (and
    // 1-ulp outside them, to capture the raw side of the jump)
    std::vector<double> extra;
    for (const auto& mp : mass_points_) {
      const double e0 = mp.c - mp.epsilon;
      const double e1 = mp.c + mp.epsilon;
      extra.push_back(std::nextafter(e0, -1e308));
      extra.push_back(e0);
      extra.push_back(mp.c);
      extra.push_back(e1);
      extra.push_back(std::nextafter(e1, 1e308));
    }
    std::sort(extra.begin(), extra.end());

    auto fbar = [&](double x) {
      for (const auto& mp : mass_points_)
        if (mp.contains(x)) return mp.plateau;
      const std::size_t i = t.segment_of(x);
      const double u = (x - t.xs[i]) / (t.xs[i + 1] - t.xs[i]);
      const double v = t.fs[i] + u * (t.fs[i + 1] - t.fs[i]);
      return v < 0.0 ? 0.0 : v;
    };

    std::size_t node = 0;       // first table node >= column start
    std::size_t ex = 0;         // first extra point >= column start
    std::vector<double> pts;
    for (std::size_t j = 0; j < g.n_columns; ++j) {
      const double lo = g.a + double(j) * w;
      const double hi = (j + 1 == g.n_columns) ? g.b : g.a + double(j + 1) * w;
      pts.clear();
      pts.push_back(lo);
      while (node < t.xs.size() && t.xs[node] <= lo) ++node;
      for (std::size_t k = node; k < t.xs.size() && t.xs[k] < hi; ++k)
        pts.push_back(t.xs[k]);
      while (ex < extra.size() && extra[ex] <= lo) ++ex;
      for (std::size_t k = ex; k < extra.size() && extra[k] < hi; ++k)
        pts.push_back(extra[k]);
      pts.push_back(hi);
      std::sort(pts.begin(), pts.end());

      double fl = std::numeric_limits<double>::infinity();
      double fh = 0.0;
      double acc = 0.0;
      double vprev = fbar(pts[0]);
      fl = std::min(fl, vprev);
      fh = std::max(fh, vprev);
      for (std::size_t k = 1; k < pts.size(); ++k) {
        const double v = fbar(pts[k]);
        fl = std::min(fl, v);
        fh = std::max(fh, v);
        acc += 0.5 * (vprev + v) * (pts[k] - pts[k - 1]);
        vprev = v;
      }
      g.f_lo[j] = fl;
      g.f_hi[j] = fh;
      g.col_integral[j] = acc;
    }
  }

  void profile_sampled(GridProfile& g, int s) const {
    const double w = (g.b - g.a) / double(g.n_columns);
    const std::size_t per = std::size_t(s - 1);
    const std::size_t total = g.n_columns * per + 1;
    std::vector<double> vals(total);
    for (std::size_t i = 0; i < total; ++i) {
      const double x = (i == total - 1)
                           ? g.b
                           : g.a + (g.b - g.a) * double(i) / double(total - 1);
      vals[i] = eval(x);
    }
    for (std::size_t j = 0; j < g.n_columns; ++j) {
      const std::size_t i0 = j * per;
      double fl = vals[i0];
      double fh = vals[i0];
      double acc = 0.0;
      for (std::size_t k = 0; k < per; ++k) {
        const double v0 = vals[i0 + k];
        const double v1 = vals[i0 + k + 1];
        fl = std::min(fl, v1);
        fh = std::max(fh, v1);
        acc += 0.5 * (v0 + v1) * (w / double(per));
      }
      // columns intersecting a mass interval: the plateau and the raw values
      // just outside its edges may fall between samples
      const double lo = g.a + double(j) * w;
      const double hi = lo + w;
      for (const auto& mp : mass_points_) {
        const double e0 = mp.c - mp.epsilon;
        const double e1 = mp.c + mp.epsilon;
        if (e1 < lo || e0 > hi) continue;
        fh = std::max(fh, mp.plateau);
        fl = std::min(fl, mp.plateau);
        for (double probe : {std::nextafter(e0, -1e308), std::nextafter(e1, 1e308)}) {
          if (probe > lo && probe < hi) {
            const double v = eval(probe);
            fh = std::max(fh, v);
            fl = std::min(fl, v);
          }
        }
      }
      g.f_lo[j] = fl;
      g.f_hi[j] = fh;
      g.col_integral[j] = acc;
    }
  }

  Interval support_;
  std::function<double(double)> fn_;
  std::shared_ptr<const TabularDensity> table_;
  std::vector<MassPointSpec> mass_points_;
  std::string name_;
  mutable std::atomic<std::uint64_t> eval_count_{0};
};

}  // namespace tilegen
