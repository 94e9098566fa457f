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

// Group-level analysis: signatures, descriptive statistics, significance
// tests between groups, the five-way stream partition and per-type reports.

#ifndef EMERGE_ANALYSIS_H_
#define EMERGE_ANALYSIS_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emerge/bursts.h"
#include "emerge/ingest.h"
#include "emerge/stats.h"
#include "emerge/timeseries.h"

namespace emerge {

struct GroupSignature {
  std::size_t length = 0;
  std::vector<double> mean_curve;
  std::vector<double> std_curve;  // population, pointwise
  std::size_t n_members = 0;
};

struct SignatureOptions {
  std::optional<std::size_t> length;  // default: longest member
  std::size_t max_length = 0;         // clamp; 0 disables
};

// Standardizes each member, stretches it to the common length and averages
// pointwise. Throws InputError for an empty group.
GroupSignature group_signature(const std::vector<std::vector<double>>& members,
                               const SignatureOptions& options = {});

// Per-entity quantities behind the descriptive statistics.
struct EntityFeatures {
  double duration = 0.0;  // days, first mention to incorporation
  double volume = 0.0;    // documents
  double velocity = 0.0;  // volume / duration, per entity
  double n_bursts = 0.0;
  double burst_duration = 0.0;  // mean normalized burst width
  double burst_value = 0.0;     // mean normalized burst height
};

EntityFeatures entity_features(const EmergenceSeries& series,
                               const BurstSet& bursts);

struct GroupStats {
  std::string group;
  std::size_t n = 0;
  Summary duration, volume, velocity;
  Summary n_bursts;
  // Burst width/height summaries cover only entities with at least one
  // burst; n_with_bursts counts them.
  std::size_t n_with_bursts = 0;
  Summary burst_duration, burst_value;
};

// Throws InputError for an empty group.
GroupStats descriptive_stats(std::span<const EntityFeatures> group,
                             std::string name = {});

enum class StreamGroup : int {
  kNewsFirst = 0,
  kSocialFirst = 1,
  kSameTime = 2,
  kOnlyNews = 3,
  kOnlySocial = 4,
};
inline constexpr int kNumStreamGroups = 5;
std::string_view stream_group_name(StreamGroup g);

StreamGroup classify_streams(const EmergingEntity& e);

struct StreamPartition {
  // Indices into Dataset::entities, ascending.
  std::array<std::vector<std::size_t>, kNumStreamGroups> groups;

  const std::vector<std::size_t>& operator[](StreamGroup g) const {
    return groups[static_cast<int>(g)];
  }
};

StreamPartition partition_by_stream(const Dataset& dataset);

struct LagSummary {
  std::optional<double> news_to_social;  // mean over news-first entities
  std::optional<double> social_to_news;  // mean over social-first entities
  std::size_t n_news_first = 0;
  std::size_t n_social_first = 0;
  std::size_t n_same_time = 0;  // zero lag, in neither direction
};

// Throws InputError when no entity appears in both streams.
LagSummary cross_stream_lag(const Dataset& dataset);

struct StreamGroupRow {
  GroupStats stats;
  // Durations measured on each stream's own series (first mention in that
  // stream to incorporation); empty when no member uses the stream.
  std::optional<Summary> news_duration;
  std::optional<Summary> social_duration;
};

std::vector<StreamGroupRow> stream_report(
    const Dataset& dataset, const StreamPartition& partition,
    std::span<const EntityFeatures> features);

struct TypeRow {
  std::string type;  // "null" for the label-free class
  bool null_class = false;
  GroupStats stats;
  std::size_t n_pageviews = 0;
  std::optional<Summary> pageviews;
  int popularity_rank = 0;  // 1 = highest mean pageviews
};

struct TypeReport {
  std::size_t min_count = 400;
  std::vector<TypeRow> rows;  // labeled rows by size, then the null row
};

// An entity contributes to the row of every label it carries. The count
// threshold applies to labeled rows only.
TypeReport type_report(const Dataset& dataset,
                       std::span<const EntityFeatures> features,
                       std::size_t min_count = 400);

struct PairwiseTest {
  std::string group_a, group_b;
  double z = 0.0;
  double p_raw = 1.0;
  double p_adjusted = 1.0;
};

struct StatisticTest {
  std::string statistic;
  bool tested = false;  // false when a group had no observations
  KruskalWallisResult omnibus;
  std::vector<PairwiseTest> pairs;
  std::size_t smallest_group = 0;
};

struct SignificanceReport {
  double alpha = 0.05;
  std::vector<std::string> groups;
  std::vector<StatisticTest> tests;
};

SignificanceReport significance_report(
    const std::vector<std::string>& names,
    const std::vector<std::vector<EntityFeatures>>& groups,
    double alpha = 0.05);

std::string group_stats_csv(const std::vector<GroupStats>& rows);
std::string stream_report_csv(const std::vector<StreamGroupRow>& rows);
std::string type_report_csv(const TypeReport& report);
std::string significance_csv(const SignificanceReport& report);
std::string signature_csv(const GroupSignature& sig);

std::string group_stats_json(const std::vector<GroupStats>& rows);
std::string stream_report_json(const std::vector<StreamGroupRow>& rows,
                               const std::optional<LagSummary>& lags);
std::string type_report_json(const TypeReport& report);
std::string significance_json(const SignificanceReport& report);

}  // namespace emerge

#endif  // EMERGE_ANALYSIS_H_
