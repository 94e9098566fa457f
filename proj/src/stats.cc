// Copyright 2026 The Emerge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "emerge/stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "emerge/common.h"

namespace emerge {

double median(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Summary summarize(std::span<const double> xs) {
  Summary s;
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(ss / static_cast<double>(xs.size()));
  s.median = median(xs);
  return s;
}

std::vector<double> midranks(std::span<const double> pooled) {
  const std::size_t n = pooled.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pooled[a] < pooled[b];
  });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && pooled[order[j]] == pooled[order[i]]) ++j;
    // Positions i..j-1 hold ranks i+1..j.
    const double r = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
    i = j;
  }
  return ranks;
}

namespace {

struct Pooled {
  std::vector<double> rank_sums;
  std::vector<double> sizes;
  double n = 0.0;
  double tie_sum = 0.0;  // sum over tie groups of t^3 - t
};

void check_groups(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw InputError("need at least two groups");
  std::size_t total = 0;
  for (const auto& g : groups) {
    if (g.empty()) throw InputError("groups must be nonempty");
    total += g.size();
  }
  if (total < 3) throw InputError("need at least three observations");
}

Pooled pool(const std::vector<std::vector<double>>& groups) {
  std::vector<double> values;
  for (const auto& g : groups) values.insert(values.end(), g.begin(), g.end());
  const auto ranks = midranks(values);
  Pooled p;
  p.n = static_cast<double>(values.size());
  std::size_t k = 0;
  for (const auto& g : groups) {
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) sum += ranks[k++];
    p.rank_sums.push_back(sum);
    p.sizes.push_back(static_cast<double>(g.size()));
  }
  std::sort(values.begin(), values.end());
  for (std::size_t i = 0; i < values.size();) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    const double t = static_cast<double>(j - i);
    p.tie_sum += t * t * t - t;
    i = j;
  }
  return p;
}

}  // namespace

KruskalWallisResult kruskal_wallis(
    const std::vector<std::vector<double>>& groups) {
  check_groups(groups);
  const Pooled p = pool(groups);
  KruskalWallisResult r;
  r.df = static_cast<int>(groups.size()) - 1;
  const double n = p.n;
  const double correction = 1.0 - p.tie_sum / (n * n * n - n);
  if (correction <= 0.0) return r;  // all values tied
  double s = 0.0;
  for (std::size_t i = 0; i < p.rank_sums.size(); ++i) {
    s += p.rank_sums[i] * p.rank_sums[i] / p.sizes[i];
  }
  const double h = 12.0 / (n * (n + 1.0)) * s - 3.0 * (n + 1.0);
  r.h = std::max(h, 0.0) / correction;
  boost::math::chi_squared dist(r.df);
  r.p = boost::math::cdf(boost::math::complement(dist, r.h));
  return r;
}

std::vector<double> holm_adjust(std::span<const double> p) {
  const std::size_t m = p.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
  std::vector<double> out(m);
  double running = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double factor = static_cast<double>(m - k);
    running = std::max(running, std::min(1.0, factor * p[order[k]]));
    out[order[k]] = running;
  }
  return out;
}

DunnResult dunn_posthoc(const std::vector<std::vector<double>>& groups) {
  check_groups(groups);
  const Pooled p = pool(groups);
  const std::size_t g = groups.size();
  DunnResult r;
  r.z.assign(g, std::vector<double>(g, 0.0));
  r.p_raw.assign(g, std::vector<double>(g, 1.0));
  r.p_adjusted.assign(g, std::vector<double>(g, 1.0));
  const double n = p.n;
  const double base = n * (n + 1.0) / 12.0 - p.tie_sum / (12.0 * (n - 1.0));
  boost::math::normal normal;
  std::vector<double> flat;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = i + 1; j < g; ++j) {
      const double var = base * (1.0 / p.sizes[i] + 1.0 / p.sizes[j]);
      const double diff =
          p.rank_sums[i] / p.sizes[i] - p.rank_sums[j] / p.sizes[j];
      double z = 0.0, pv = 1.0;
      if (var > 0.0) {
        z = diff / std::sqrt(var);
        pv = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(
                                     normal, std::fabs(z))));
      }
      r.z[i][j] = z;
      r.z[j][i] = -z;
      r.p_raw[i][j] = r.p_raw[j][i] = pv;
      flat.push_back(pv);
      pairs.emplace_back(i, j);
    }
  }
  const auto adj = holm_adjust(flat);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    auto [i, j] = pairs[k];
    r.p_adjusted[i][j] = r.p_adjusted[j][i] = adj[k];
  }
  return r;
}

}  // namespace emerge
