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

// Pipeline stages with on-disk intermediates.
//
//   build       mentions + metadata -> dataset.jsonl, filter report, series
//   bursts      dataset -> bursts.jsonl
//   cluster     bursts -> distances.tiles, dendrogram, flat cuts
//   signatures  dataset + dendrogram -> per-cluster signature CSV/SVG
//   stats       dataset + bursts + dendrogram -> group stats, significance
//   streams     dataset + bursts -> five-way stream report, lags
//   types       dataset + bursts -> per-type report
//
// Each stage writes its files atomically together with a run manifest.

#ifndef EMERGE_PIPELINE_H_
#define EMERGE_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "emerge/bursts.h"
#include "emerge/ingest.h"
#include "emerge/similarity.h"
#include "emerge/timeseries.h"

namespace emerge {

struct PipelineConfig {
  std::filesystem::path mentions;
  std::filesystem::path metadata;
  std::filesystem::path out_dir = "out";
  std::optional<MentionFormat> format;  // default: from the file extension
  std::optional<DaySpan> span;          // required by build
  Day epoch = 0;                        // day 0 for ISO-dated input
  int min_docs = 5;
  int window = 7;
  double cutoff_sigma = 1.5;
  ThresholdMode threshold_mode = ThresholdMode::kMeanCentered;
  CountMode count_mode = CountMode::kDocuments;
  BsimVariant variant = BsimVariant::kJaccard;
  std::vector<int> cuts = {1, 2};
  std::optional<std::size_t> sig_length;  // nullopt: longest member
  std::size_t sig_max_length = 0;         // 0: no clamp
  std::uint64_t mem_budget = 4ull << 30;
  int workers = 1;
  std::uint64_t seed = 0;
  bool strict = false;
  std::size_t max_entities = 0;  // 0: keep all
  std::size_t type_min_count = 400;
  int summary_levels = 4;
  double alpha = 0.05;
  std::vector<std::string> plot_entities;
  bool quiet = false;
};

// Per-stage configuration hashes, chained from upstream.
std::string bursts_hash(const std::string& build_hash,
                        const PipelineConfig& c);
std::string cluster_hash(const std::string& bursts_hash,
                         const PipelineConfig& c);

void run_build(const PipelineConfig& c);
void run_bursts(const PipelineConfig& c);
void run_cluster(const PipelineConfig& c);
void run_signatures(const PipelineConfig& c);
void run_stats(const PipelineConfig& c);
void run_streams(const PipelineConfig& c);
void run_types(const PipelineConfig& c);
void run_all(const PipelineConfig& c);

// Command-line entry point; returns the process exit status
// (0 ok, 1 usage, 2 input error, 3 internal error).
int run_cli(int argc, char** argv);

}  // namespace emerge

#endif  // EMERGE_PIPELINE_H_
