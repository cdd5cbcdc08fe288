// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tilegen/density.hpp"
#include "tilegen/errors.hpp"
#include "tilegen/special.hpp"

namespace tilegen {

struct GofReport {
  std::string test;
  double statistic = 0.0;
  double p_value = 1.0;
  std::uint64_t n_samples = 0;
  std::uint32_t n_bins = 0;  // chi-square only
};

namespace detail {

// Merge adjacent cells until every expected count is at least 5.
inline void merge_small_expected(std::vector<double>& observed,
                                 std::vector<double>& expected) {
  for (std::size_t i = 0; i < expected.size();) {
    if (expected[i] >= 5.0 || expected.size() == 1) {
      ++i;
      continue;
    }
    const std::size_t j = (i + 1 < expected.size()) ? i + 1 : i - 1;
    expected[std::min(i, j)] += expected[std::max(i, j)];
    observed[std::min(i, j)] += observed[std::max(i, j)];
    expected.erase(expected.begin() + std::ptrdiff_t(std::max(i, j)));
    observed.erase(observed.begin() + std::ptrdiff_t(std::max(i, j)));
    if (i > 0) --i;
  }
}

}  // namespace detail

// Chi-square of samples against per-bin masses from the model's quadrature,
// equal-width bins over the support.
inline GofReport chi_square_gof(const std::vector<double>& samples,
                                const DensityModel& model,
                                std::uint32_t n_bins = 64) {
  if (samples.size() < 1000)
    throw DomainError("chi-square needs at least 1000 samples");
  const auto sup = model.support();
  const double total = model.integral(sup.lo, sup.hi);
  std::vector<double> observed(n_bins, 0.0);
  std::vector<double> expected(n_bins, 0.0);
  const double w = sup.width() / n_bins;
  for (double x : samples) {
    auto j = std::size_t((x - sup.lo) / w);
    if (j >= n_bins) j = n_bins - 1;
    observed[j] += 1.0;
  }
  for (std::uint32_t j = 0; j < n_bins; ++j) {
    const double lo = sup.lo + j * w;
    const double hi = (j + 1 == n_bins) ? sup.hi : lo + w;
    expected[j] = model.integral(lo, hi) / total * double(samples.size());
  }
  detail::merge_small_expected(observed, expected);
  double stat = 0.0;
  for (std::size_t j = 0; j < expected.size(); ++j) {
    const double d = observed[j] - expected[j];
    stat += d * d / expected[j];
  }
  GofReport r;
  r.test = "chi_square";
  r.statistic = stat;
  r.n_samples = samples.size();
  r.n_bins = std::uint32_t(expected.size());
  r.p_value = chi_square_sf(stat, double(expected.size()) - 1.0);
  return r;
}

// Two-sample chi-square on pre-binned counts (both histograms share bins).
inline GofReport chi_square_two_sample(const std::vector<double>& count_a,
                                       const std::vector<double>& count_b) {
  if (count_a.size() != count_b.size())
    throw DomainError("two-sample chi-square needs matching bins");
  double na = 0.0, nb = 0.0;
  for (double v : count_a) na += v;
  for (double v : count_b) nb += v;
  if (na < 1.0 || nb < 1.0) throw DomainError("empty histogram");
  std::vector<double> a = count_a;
  std::vector<double> b = count_b;
  // merge bins with tiny combined counts
  std::vector<double> comb(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) comb[i] = a[i] + b[i];
  for (std::size_t i = 0; i < comb.size();) {
    if (comb[i] >= 10.0 || comb.size() == 1) {
      ++i;
      continue;
    }
    const std::size_t j = (i + 1 < comb.size()) ? i + 1 : i - 1;
    const std::size_t keep = std::min(i, j), drop = std::max(i, j);
    comb[keep] += comb[drop];
    a[keep] += a[drop];
    b[keep] += b[drop];
    comb.erase(comb.begin() + std::ptrdiff_t(drop));
    a.erase(a.begin() + std::ptrdiff_t(drop));
    b.erase(b.begin() + std::ptrdiff_t(drop));
    if (i > 0) --i;
  }
  const double ra = std::sqrt(nb / na);
  const double rb = std::sqrt(na / nb);
  double stat = 0.0;
  std::size_t dof = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (comb[i] <= 0.0) continue;
    const double d = ra * a[i] - rb * b[i];
    stat += d * d / comb[i];
    ++dof;
  }
  GofReport r;
  r.test = "chi_square_two_sample";
  r.statistic = stat;
  r.n_samples = std::uint64_t(na + nb);
  r.n_bins = std::uint32_t(a.size());
  r.p_value = chi_square_sf(stat, double(dof) - 1.0);
  return r;
}

// One-sample Kolmogorov-Smirnov against a CDF; asymptotic p-value with the
// Stephens small-sample correction.
inline GofReport ks_gof(std::vector<double> samples,
                        const std::function<double(double)>& cdf) {
  if (samples.size() < 1000)
    throw DomainError("KS needs at least 1000 samples");
  std::sort(samples.begin(), samples.end());
  const double n = double(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs(f - double(i) / n));
    d = std::max(d, std::abs(double(i + 1) / n - f));
  }
  const double sn = std::sqrt(n);
  GofReport r;
  r.test = "kolmogorov_smirnov";
  r.statistic = d;
  r.n_samples = samples.size();
  r.p_value = kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d);
  return r;
}

// Two-sample KS.
inline GofReport ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.size() < 1000 || b.size() < 1000)
    throw DomainError("KS needs at least 1000 samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(double(i) / double(a.size()) -
                             double(j) / double(b.size())));
  }
  const double ne = double(a.size()) * double(b.size()) /
                    double(a.size() + b.size());
  const double sn = std::sqrt(ne);
  GofReport r;
  r.test = "kolmogorov_smirnov_two_sample";
  r.statistic = d;
  r.n_samples = a.size() + b.size();
  r.p_value = kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d);
  return r;
}

}  // namespace tilegen
