// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "tilegen/density.hpp"
#include "tilegen/errors.hpp"
#include "tilegen/tiling.hpp"
#include "tilegen/urng.hpp"

namespace tilegen {

struct SamplerCounters {
  std::uint64_t attempts = 0;
  std::uint64_t accepts = 0;
  std::uint64_t rejections = 0;
  std::uint64_t density_evals = 0;
};

// Production stage: pick a uniform tile, place X uniformly inside it, accept
// by label lookup (Interior) or by comparing a second uniform against f(X)
// (Border). One state per thread; many states may share one table.
class SamplerState {
 public:
  SamplerState(const TilingTable& table, const DensityModel& model,
               UniformSource source)
      : table_(&table), model_(&model), src_(std::move(source)) {
    if (table_->n_tiles() == 0)
      throw InternalError("sampler needs a non-empty table");
    n_ = table_->n_tiles();
    dx_ = table_->delta_x();
    dy_ = table_->delta_y();
  }

  double draw() {
    const double a = table_->a;
    const double b = table_->b;
    const Tile* tiles = table_->tiles.data();
    for (std::uint64_t iter = 0; iter < kMaxIterations; ++iter) {
      ++counters_.attempts;
      const Tile t = tiles[src_.uniform_index(n_)];
      double x = a + dx_ * (double(t.col) + src_.unit_real());
      if (x > b) x = b;
      if (t.interior()) {
        ++counters_.accepts;
        return x;
      }
      const double y = dy_ * (double(t.row()) + src_.unit_real());
      ++counters_.density_evals;
      if (y < model_->eval(x)) {
        ++counters_.accepts;
        return x;
      }
      ++counters_.rejections;
    }
    throw InternalError("draw did not accept within the iteration cap; "
                        "the table is inconsistent with the density");
  }

  std::vector<double> draw_batch(std::size_t n) {
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(draw());
    return out;
  }

  const SamplerCounters& counters() const { return counters_; }
  UniformSource& source() { return src_; }
  const TilingTable& table() const { return *table_; }

 private:
  static constexpr std::uint64_t kMaxIterations = 1'000'000;

  const TilingTable* table_;
  const DensityModel* model_;
  UniformSource src_;
  SamplerCounters counters_;
  std::uint64_t n_ = 0;
  double dx_ = 0.0;
  double dy_ = 0.0;
};

}  // namespace tilegen
