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

#include "emerge/bursts.h"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "emerge/timeseries.h"

namespace emerge {

std::vector<double> moving_average(std::span<const double> series,
                                   int window) {
  if (window < 1) throw InputError("moving-average window must be >= 1");
  const std::size_t w = static_cast<std::size_t>(window);
  std::vector<double> out(series.size());
  // Each window is summed directly; a running sum would accumulate rounding
  // drift and break the affine invariance of detection.
  for (std::size_t i = 0; i < series.size(); ++i) {
    std::size_t lo = i + 1 >= w ? i + 1 - w : 0;
    double sum = 0.0;
    for (std::size_t j = lo; j <= i; ++j) sum += series[j];
    out[i] = sum / static_cast<double>(i - lo + 1);
  }
  return out;
}

BurstSet detect_bursts(std::span<const double> series,
                       const BurstParams& params) {
  BurstSet bs;
  bs.source_length = series.size();
  bs.window = params.window;
  bs.cutoff_sigma = params.cutoff_sigma;
  for (double x : series) bs.series_total += x;
  if (series.empty()) return bs;

  const auto ma = moving_average(series, params.window);
  const double sd = pstdev(ma);
  const double center =
      params.mode == ThresholdMode::kMeanCentered ? mean(ma) : 0.0;
  bs.threshold = center + params.cutoff_sigma * sd;

  const bool constant = std::all_of(series.begin(), series.end(),
                                    [&](double x) { return x == series[0]; });
  if (constant || sd == 0.0) return bs;

  for (std::size_t i = 0; i < ma.size();) {
    if (!(ma[i] > bs.threshold)) {
      ++i;
      continue;
    }
    Burst b;
    b.start = i;
    b.peak = ma[i];
    while (i < ma.size() && ma[i] > bs.threshold) {
      b.peak = std::max(b.peak, ma[i]);
      ++i;
    }
    b.end = i - 1;
    bs.bursts.push_back(b);
  }
  return bs;
}

BurstStats burst_stats(const BurstSet& bs) {
  BurstStats st;
  st.n_bursts = bs.bursts.size();
  if (bs.bursts.empty()) return st;
  double dur = 0.0, val = 0.0;
  for (const Burst& b : bs.bursts) {
    dur += static_cast<double>(b.width()) /
           static_cast<double>(bs.source_length);
    val += bs.series_total != 0.0 ? b.peak / bs.series_total : 0.0;
  }
  st.mean_norm_duration = dur / static_cast<double>(bs.bursts.size());
  st.mean_norm_value = val / static_cast<double>(bs.bursts.size());
  return st;
}

std::string burst_set_json(const BurstSet& bs, const std::string& entity_id,
                           Day start_day) {
  nlohmann::ordered_json j;
  j["entity_id"] = entity_id;
  j["start_day"] = start_day;
  j["source_length"] = bs.source_length;
  j["window"] = bs.window;
  j["cutoff_sigma"] = bs.cutoff_sigma;
  j["threshold"] = bs.threshold;
  j["series_total"] = bs.series_total;
  auto arr = nlohmann::ordered_json::array();
  const double len = static_cast<double>(bs.source_length);
  for (const Burst& b : bs.bursts) {
    nlohmann::ordered_json row;
    row["start_idx"] = b.start;
    row["end_idx"] = b.end;
    row["start_day"] = start_day + static_cast<Day>(b.start);
    row["end_day"] = start_day + static_cast<Day>(b.end);
    row["rel_start"] = static_cast<double>(b.start) / len;
    row["rel_end"] = static_cast<double>(b.end + 1) / len;
    row["peak"] = b.peak;
    arr.push_back(std::move(row));
  }
  j["bursts"] = std::move(arr);
  return j.dump();
}

}  // namespace emerge
