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

#include "emerge/timeseries.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>
#include <json.hpp>

namespace emerge {

std::int64_t EmergenceSeries::volume() const {
  return std::accumulate(values.begin(), values.end(), std::int64_t{0});
}

std::vector<double> EmergenceSeries::as_double() const {
  return std::vector<double>(values.begin(), values.end());
}

namespace {

void add_rows(const std::vector<DayCount>& rows, Day start, CountMode mode,
              std::vector<std::int64_t>& out) {
  for (const DayCount& r : rows) {
    auto idx = r.day - start;
    if (idx < 0 || idx >= static_cast<Day>(out.size())) continue;
    out[idx] += mode == CountMode::kDocuments ? r.docs : r.occurrences;
  }
}

}  // namespace

EmergenceSeries build_series(const EmergingEntity& entity, CountMode mode,
                             bool with_streams) {
  EmergenceSeries s;
  s.entity_id = entity.entity_id;
  s.start_day = entity.first_day();
  const Day length = entity.creation_day - s.start_day;
  if (length < 1) {
    throw InputError("entity '" + entity.entity_id +
                     "' has no pre-creation activity");
  }
  std::vector<std::int64_t> news(length, 0), social(length, 0);
  add_rows(entity.news, s.start_day, mode, news);
  add_rows(entity.social, s.start_day, mode, social);
  s.values.resize(length);
  for (Day i = 0; i < length; ++i) s.values[i] = news[i] + social[i];
  if (with_streams) {
    s.news = std::move(news);
    s.social = std::move(social);
  }
  return s;
}

EmergenceSeries build_series(const Dataset& dataset, std::string_view entity_id,
                             CountMode mode) {
  const EmergingEntity* e = dataset.find(entity_id);
  if (e == nullptr) {
    throw InputError("unknown entity '" + std::string(entity_id) + "'");
  }
  return build_series(*e, mode);
}

std::vector<EmergenceSeries> build_all_series(const Dataset& dataset,
                                              CountMode mode, int workers) {
  std::vector<EmergenceSeries> out(dataset.entities.size());
  parallel_for(out.size(), workers, [&](std::size_t i) {
    out[i] = build_series(dataset.entities[i], mode);
  });
  return out;
}

std::optional<EmergenceSeries> build_stream_series(const EmergingEntity& entity,
                                                   Stream stream,
                                                   CountMode mode) {
  const auto& rows = entity.stream(stream);
  if (rows.empty()) return std::nullopt;
  EmergenceSeries s;
  s.entity_id = entity.entity_id;
  s.start_day = rows.front().day;
  s.values.assign(entity.creation_day - s.start_day, 0);
  add_rows(rows, s.start_day, mode, s.values);
  return s;
}

std::vector<double> interpolate(std::span<const double> series,
                                std::size_t length) {
  if (length < 1) throw InputError("interpolation length must be >= 1");
  if (series.empty()) throw InputError("cannot interpolate an empty series");
  const std::size_t n = series.size();
  if (length == n) return std::vector<double>(series.begin(), series.end());
  if (length == 1) {
    if (n != 1) {
      throw InputError("length 1 requires a single-sample series");
    }
    return {series[0]};
  }
  std::vector<double> out(length);
  if (n == 1) {
    std::fill(out.begin(), out.end(), series[0]);
    return out;
  }
  const double scale =
      static_cast<double>(n - 1) / static_cast<double>(length - 1);
  for (std::size_t i = 0; i < length; ++i) {
    double pos = static_cast<double>(i) * scale;
    auto lo = static_cast<std::size_t>(std::floor(pos));
    if (lo >= n - 1) {
      out[i] = series[n - 1];
      continue;
    }
    double frac = pos - static_cast<double>(lo);
    out[i] = series[lo] + frac * (series[lo + 1] - series[lo]);
  }
  out.front() = series.front();
  out.back() = series.back();
  return out;
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

double pstdev(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size()));
}

std::vector<double> standardize(std::span<const double> series) {
  std::vector<double> out(series.size(), 0.0);
  if (series.empty()) return out;
  const bool constant = std::all_of(series.begin(), series.end(),
                                    [&](double x) { return x == series[0]; });
  if (constant) return out;
  const double m = mean(series);
  const double sd = pstdev(series);
  if (sd == 0.0) return out;
  for (std::size_t i = 0; i < series.size(); ++i) {
    out[i] = (series[i] - m) / sd;
  }
  return out;
}

std::string series_csv_row(const EmergenceSeries& s) {
  std::string out = fmt::format("{},{}", s.entity_id, s.start_day);
  for (auto v : s.values) out += fmt::format(",{}", v);
  out += '\n';
  return out;
}

std::string series_json_object(const EmergenceSeries& s) {
  nlohmann::ordered_json j;
  j["entity_id"] = s.entity_id;
  j["start_day"] = s.start_day;
  j["creation_day"] = s.creation_day();
  j["values"] = s.values;
  if (s.news) j["news"] = *s.news;
  if (s.social) j["social"] = *s.social;
  return j.dump();
}

std::string series_csv(const std::vector<EmergenceSeries>& series) {
  std::string out(kSeriesCsvHeader);
  for (const auto& s : series) out += series_csv_row(s);
  return out;
}

std::string series_json(const std::vector<EmergenceSeries>& series) {
  std::string out = "[";
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (i) out += ',';
    out += series_json_object(series[i]);
  }
  out += ']';
  return out;
}

}  // namespace emerge
