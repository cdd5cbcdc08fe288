// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tilegen/density.hpp"
#include "tilegen/errors.hpp"

namespace tilegen {

// One tile of the covering. Geometry is implicit: all tiles at a given
// refinement level are congruent, x-extent [a + col*dx, a + (col+1)*dx],
// y-extent [row*dy, (row+1)*dy]. The label bit marks Interior tiles (top at
// or below the squeeze bound, accepted without evaluating f).
struct Tile {
  static constexpr std::uint32_t kInteriorBit = 0x80000000u;
  std::uint32_t col = 0;
  std::uint32_t row_and_label = 0;

  std::uint32_t row() const { return row_and_label & ~kInteriorBit; }
  bool interior() const { return (row_and_label & kInteriorBit) != 0; }
  static Tile make(std::uint32_t col, std::uint32_t row, bool interior) {
    return {col, row | (interior ? kInteriorBit : 0u)};
  }
  friend bool operator==(const Tile&, const Tile&) = default;
};

struct RefinementStats {
  std::uint32_t level = 0;
  std::uint64_t n_tiles = 0;
  double rejection_rate = 0.0;   // Eq. (1): 1 - integral f / (N S)
  double evaluation_rate = 0.0;  // Eq. (2): border-tile area fraction
  std::uint64_t memory_bytes = 0;
};

struct StopRule {
  std::optional<double> target_rejection = 0.02;
  std::optional<double> target_evaluation;
  std::uint32_t max_level = 26;
  std::uint64_t memory_cap_bytes = 64ull << 20;
  int samples_per_column = 3;
};

// The immutable product of setup. n_columns = 2^(level-1); delta_y shrinks
// with level from the initial tile height, so every refinement splits each
// tile into four congruent children.
struct TilingTable {
  double a = 0.0;
  double b = 1.0;
  std::uint32_t level = 1;
  double initial_height = 0.0;  // H: height of the level-1 tile
  double total_integral = 0.0;  // integral of f over [a,b]
  std::vector<Tile> tiles;      // column-major, rows ascending

  std::uint64_t n_columns() const { return std::uint64_t(1) << (level - 1); }
  double delta_x() const { return (b - a) / double(n_columns()); }
  double delta_y() const { return initial_height / double(n_columns()); }
  double tile_area() const { return delta_x() * delta_y(); }
  std::uint64_t n_tiles() const { return tiles.size(); }

  std::uint64_t border_count() const {
    std::uint64_t nb = 0;
    for (const Tile& t : tiles) nb += t.interior() ? 0 : 1;
    return nb;
  }
};

namespace detail {

// Tie rule at exact equality f = tile edge: the edge belongs to the tile
// below, so the kept-stack count is ceil(f_hi/dy) and the interior stack is
// floor(f_lo/dy). The 1e-12 nudges only absorb float noise at exact ties.
inline std::uint64_t kept_stack(double f_hi, double dy) {
  const double v = f_hi / dy;
  const double c = std::ceil(v - 1e-12);
  return c <= 0.0 ? 0 : std::uint64_t(c);
}

inline std::uint64_t interior_stack(double f_lo, double dy) {
  const double v = f_lo / dy;
  const double c = std::floor(v + 1e-12);
  return c <= 0.0 ? 0 : std::uint64_t(c);
}

struct ColumnStacks {
  std::vector<std::uint64_t> kept;
  std::vector<std::uint64_t> interior;
  std::uint64_t total = 0;
  std::uint64_t border = 0;
};

// Per-column tile stacks at a given level. A column keeps the rows whose
// bottom lies below the column's f upper bound; rows whose top lies at or
// below the f lower bound are Interior. Children never outgrow their
// parents: a tile discarded at an earlier level stays discarded even if a
// finer profile later finds density above it.
inline ColumnStacks column_stacks(const DensityModel& model, std::uint32_t level,
                                  double height, int samples_per_column,
                                  const std::vector<std::uint64_t>* parent_kept) {
  const std::size_t n = std::size_t(1) << (level - 1);
  GridProfile g = model.profile(n, samples_per_column);
  const double dy = height / double(n);
  ColumnStacks s;
  s.kept.resize(n);
  s.interior.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::uint64_t k = kept_stack(g.f_hi[j], dy);
    if (parent_kept) k = std::min(k, 2 * (*parent_kept)[j / 2]);
    std::uint64_t q = std::min(interior_stack(g.f_lo[j], dy), k);
    s.kept[j] = k;
    s.interior[j] = q;
    s.total += k;
    s.border += k - q;
  }
  return s;
}

inline std::vector<std::uint64_t> stacks_from_tiles(const TilingTable& t) {
  std::vector<std::uint64_t> kept(t.n_columns(), 0);
  for (const Tile& tile : t.tiles)
    kept[tile.col] = std::max<std::uint64_t>(kept[tile.col], tile.row() + 1);
  return kept;
}

inline void materialize(TilingTable& t, const ColumnStacks& s) {
  t.tiles.clear();
  t.tiles.reserve(s.total);
  for (std::size_t j = 0; j < s.kept.size(); ++j)
    for (std::uint64_t r = 0; r < s.kept[j]; ++r)
      t.tiles.push_back(
          Tile::make(std::uint32_t(j), std::uint32_t(r), r < s.interior[j]));
}

}  // namespace detail

inline RefinementStats stats(const TilingTable& t) {
  RefinementStats r;
  r.level = t.level;
  r.n_tiles = t.n_tiles();
  const double covered = double(r.n_tiles) * t.tile_area();
  r.rejection_rate = r.n_tiles == 0 ? 1.0 : 1.0 - t.total_integral / covered;
  r.evaluation_rate =
      r.n_tiles == 0 ? 1.0 : double(t.border_count()) / double(r.n_tiles);
  r.memory_bytes = r.n_tiles * 8;
  return r;
}

// Level-1 table: one tile [a,b] x [0,H], H the profiled maximum of f (the
// plateau height for mass-point densities). For closed-form models the
// maximum is located on a fine scouting profile; a tabular model's exact
// maximum comes from its nodes.
inline TilingTable initial_tile(const DensityModel& model,
                                int samples_per_column = 3) {
  const std::size_t scout = model.is_tabular_linear() ? 1 : 4096;
  GridProfile g = model.profile(scout, samples_per_column);
  if (!(g.global_max > 0.0))
    throw DegenerateDensity("density maximum is zero; nothing to tile");
  TilingTable t;
  t.a = g.a;
  t.b = g.b;
  t.level = 1;
  t.initial_height = g.global_max;
  t.total_integral = model.integral(g.a, g.b);

  double f_lo = std::numeric_limits<double>::infinity();
  for (double v : g.f_lo) f_lo = std::min(f_lo, v);
  const bool interior = detail::interior_stack(f_lo, t.initial_height) >= 1;
  t.tiles.push_back(Tile::make(0, 0, interior));
  return t;
}

struct RefineOptions {
  int samples_per_column = 3;
  std::uint64_t memory_cap_bytes = 64ull << 20;
};

// One refinement cycle: every tile splits into four congruent children,
// children entirely above the column's f upper bound are discarded, the rest
// are relabeled against the bounds recomputed at the new column width.
inline TilingTable refine(const TilingTable& table, const DensityModel& model,
                          const RefineOptions& opts = {}) {
  if (table.level >= 31) throw MemoryBudgetExceeded("refinement level exceeds 31");
  const std::uint32_t level = table.level + 1;
  const auto parents = detail::stacks_from_tiles(table);
  const auto stacks = detail::column_stacks(model, level, table.initial_height,
                                            opts.samples_per_column, &parents);
  if (stacks.total * sizeof(Tile) > opts.memory_cap_bytes)
    throw MemoryBudgetExceeded(
        "projected " + std::to_string(stacks.total) + " tiles exceed the " +
        std::to_string(opts.memory_cap_bytes) + "-byte cap");
  TilingTable t;
  t.a = table.a;
  t.b = table.b;
  t.level = level;
  t.initial_height = table.initial_height;
  t.total_integral = table.total_integral;
  detail::materialize(t, stacks);
  return t;
}

struct BuildResult {
  TilingTable table;
  std::vector<RefinementStats> history;
  bool reached_target = false;
  std::string stop_reason;
};

// Refine until the first satisfied stop bound. On a blown memory budget the
// best table so far is returned with reached_target = false.
inline BuildResult build(const DensityModel& model, const StopRule& stop = {}) {
  if (!stop.target_rejection && !stop.target_evaluation &&
      stop.max_level == 0)
    throw ParameterError("StopRule needs at least one bound");
  BuildResult out;
  out.table = initial_tile(model, stop.samples_per_column);
  out.history.push_back(stats(out.table));

  auto satisfied = [&](const RefinementStats& s) -> const char* {
    if (stop.target_rejection && s.rejection_rate <= *stop.target_rejection)
      return "rejection target";
    if (stop.target_evaluation && s.evaluation_rate <= *stop.target_evaluation)
      return "evaluation target";
    if (s.level >= stop.max_level) return "max level";
    return nullptr;
  };

  for (;;) {
    if (const char* why = satisfied(out.history.back())) {
      out.reached_target = true;
      out.stop_reason = why;
      return out;
    }
    RefineOptions ro{stop.samples_per_column, stop.memory_cap_bytes};
    try {
      out.table = refine(out.table, model, ro);
    } catch (const MemoryBudgetExceeded& e) {
      out.reached_target = false;
      out.stop_reason = e.what();
      return out;
    }
    out.history.push_back(stats(out.table));
  }
}

struct ProjectedCount {
  std::uint64_t n_tiles = 0;
  std::uint64_t border = 0;
};

// Tile count the recursive build would retain at the given level, by column
// arithmetic only (no tile is materialized). Matches build()/refine() exactly.
inline ProjectedCount projected_tile_count(const DensityModel& model,
                                           std::uint32_t level,
                                           int samples_per_column = 3) {
  TilingTable seed = initial_tile(model, samples_per_column);
  std::vector<std::uint64_t> parent = detail::stacks_from_tiles(seed);
  if (level == 1) return {seed.n_tiles(), seed.border_count()};
  ProjectedCount pc;
  for (std::uint32_t lv = 2; lv <= level; ++lv) {
    auto s = detail::column_stacks(model, lv, seed.initial_height,
                                   samples_per_column, &parent);
    pc.n_tiles = s.total;
    pc.border = s.border;
    parent = std::move(s.kept);
  }
  return pc;
}

// Number of refinement cycles needed before the column width resolves a
// mass-point interval: ceil(log2((b-a)/(2 eps))).
inline std::uint32_t refinements_to_resolve(double support_width, double epsilon) {
  if (!(epsilon > 0.0) || !(support_width > 0.0))
    throw DomainError("refinements_to_resolve: bad arguments");
  return std::uint32_t(std::ceil(std::log2(support_width / (2.0 * epsilon))));
}

// Diagnostic upper bound on the density of f-evaluations per variate at
// location x: proportional to dx * d(log f)/dx, normalized so its integral
// over the support equals the table's evaluation rate.
inline double density_bound_raw(const TilingTable& t, const DensityModel& model,
                                double x) {
  const double h = t.delta_x();
  const double lo = std::max(t.a, x - 0.5 * h);
  const double hi = std::min(t.b, x + 0.5 * h);
  const double f0 = model.eval(x);
  if (f0 <= 0.0) return 0.0;
  const double fl = model.eval(lo);
  const double fh = model.eval(hi);
  if (fl <= 0.0 || fh <= 0.0) return 0.0;
  return h * std::abs(std::log(fh) - std::log(fl)) / (hi - lo);
}

inline double eval_density_bound(const TilingTable& t, const DensityModel& model,
                                 double x) {
  const double raw = density_bound_raw(t, model, x);
  if (raw == 0.0) return 0.0;
  QuadratureOptions qo;
  qo.rel_tol = 1e-6;
  const double norm = integrate(
      [&](double u) { return density_bound_raw(t, model, u); }, t.a, t.b, qo);
  if (!(norm > 0.0)) return 0.0;
  return raw * stats(t).evaluation_rate / norm;
}

}  // namespace tilegen
