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

// Burst detection on emergence series.
//
// A series is smoothed with a trailing moving average of width w (7 days by
// default). Days whose smoothed value exceeds a cutoff are bursting, and a
// burst is a maximal run of such days. The cutoff is mean(MA) + k*sd(MA)
// with k = 1.5; kBareSigma uses k*sd(MA) alone.

#ifndef EMERGE_BURSTS_H_
#define EMERGE_BURSTS_H_

#include <span>
#include <string>
#include <vector>

#include "emerge/common.h"

namespace emerge {

enum class ThresholdMode { kMeanCentered, kBareSigma };

struct BurstParams {
  int window = 7;
  double cutoff_sigma = 1.5;
  ThresholdMode mode = ThresholdMode::kMeanCentered;
};

struct Burst {
  std::size_t start = 0;  // inclusive
  std::size_t end = 0;    // inclusive
  double peak = 0.0;      // max of the smoothed series over [start, end]

  std::size_t width() const { return end - start + 1; }
  bool operator==(const Burst&) const = default;
};

struct BurstSet {
  std::vector<Burst> bursts;  // disjoint, sorted
  std::size_t source_length = 0;
  int window = 7;
  double cutoff_sigma = 1.5;
  double threshold = 0.0;
  double series_total = 0.0;  // sum of the raw series
};

struct BurstStats {
  std::size_t n_bursts = 0;
  double mean_norm_duration = 0.0;  // mean of width / source_length
  double mean_norm_value = 0.0;     // mean of peak / series_total
};

// Trailing window mean; the first w-1 outputs average the available prefix.
std::vector<double> moving_average(std::span<const double> series, int window);

BurstSet detect_bursts(std::span<const double> series,
                       const BurstParams& params = {});

BurstStats burst_stats(const BurstSet& bs);

// JSON for one entity's bursts in index, absolute-day and relative
// coordinates.
std::string burst_set_json(const BurstSet& bs, const std::string& entity_id,
                           Day start_day);

}  // namespace emerge

#endif  // EMERGE_BURSTS_H_
