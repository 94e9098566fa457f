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

#ifndef EMERGE_TIMESERIES_H_
#define EMERGE_TIMESERIES_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emerge/common.h"
#include "emerge/ingest.h"

namespace emerge {

// What a daily value counts.
enum class CountMode { kDocuments, kOccurrences };

// Daily mention counts of one entity, from its first mention up to the day
// before its page creation. values[0] is start_day.
struct EmergenceSeries {
  std::string entity_id;
  Day start_day = 0;
  std::vector<std::int64_t> values;
  // Per-stream split; news[i] + social[i] == values[i].
  std::optional<std::vector<std::int64_t>> news;
  std::optional<std::vector<std::int64_t>> social;

  Day creation_day() const {
    return start_day + static_cast<Day>(values.size());
  }
  std::int64_t duration() const {
    return static_cast<std::int64_t>(values.size());
  }
  std::int64_t volume() const;
  double velocity() const {
    return static_cast<double>(volume()) / static_cast<double>(duration());
  }
  std::vector<double> as_double() const;
};

EmergenceSeries build_series(const EmergingEntity& entity,
                             CountMode mode = CountMode::kDocuments,
                             bool with_streams = true);

// Throws InputError when the entity is not part of the dataset.
EmergenceSeries build_series(const Dataset& dataset, std::string_view entity_id,
                             CountMode mode = CountMode::kDocuments);

std::vector<EmergenceSeries> build_all_series(
    const Dataset& dataset, CountMode mode = CountMode::kDocuments,
    int workers = 1);

// Series of a single stream: first mention in that stream up to the day
// before creation. nullopt when the entity never appears in the stream.
std::optional<EmergenceSeries> build_stream_series(
    const EmergingEntity& entity, Stream stream,
    CountMode mode = CountMode::kDocuments);

// Piecewise-linear resampling to `length` points. Output position i maps to
// source position i*(n-1)/(length-1), so both endpoints are preserved.
std::vector<double> interpolate(std::span<const double> series,
                                std::size_t length);

// z-scores with the population standard deviation. Constant input yields
// all zeros.
std::vector<double> standardize(std::span<const double> series);

double mean(std::span<const double> xs);
// Population standard deviation.
double pstdev(std::span<const double> xs);

std::string series_csv(const std::vector<EmergenceSeries>& series);
std::string series_json(const std::vector<EmergenceSeries>& series);

// Single rows of the above, for writers that stream one entity at a time.
inline constexpr std::string_view kSeriesCsvHeader = "entity_id,start_day,values\n";
std::string series_csv_row(const EmergenceSeries& s);
std::string series_json_object(const EmergenceSeries& s);

}  // namespace emerge

#endif  // EMERGE_TIMESERIES_H_
