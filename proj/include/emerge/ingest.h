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

// Mention-stream and metadata ingestion, the knowledge-base join, and the
// filtering cascade that selects emerging entities.
//
// An entity "emerges" when it is mentioned in documents dated before its
// encyclopedia page was created. The cascade mirrors the dataset acquisition
// table: all annotated mentions, mentions joined to metadata, pre-creation
// mentions, entities created inside the corpus span, and finally entities
// with at least `min_docs` distinct pre-creation documents.

#ifndef EMERGE_INGEST_H_
#define EMERGE_INGEST_H_

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "emerge/common.h"

namespace emerge {

struct MentionRecord {
  std::string doc_id;
  Day doc_day = 0;
  Stream stream = Stream::kNews;
  std::string entity_id;

  bool operator==(const MentionRecord&) const = default;
};

struct EntityMeta {
  std::string entity_id;
  Day creation_day = 0;
  std::vector<std::string> type_labels;  // empty: null class
  std::optional<std::uint64_t> pageviews;
};

enum class MentionFormat { kTsv, kJsonLines };
enum class ParseMode { kLenient, kStrict };

struct ParseStats {
  std::uint64_t lines = 0;
  std::uint64_t records = 0;
  std::uint64_t malformed = 0;
};

// Parses a day field. Accepts an integer day index, or an ISO-8601 date or
// date-time ("2012-08-06", "2012-08-06T17:31:00Z") which is truncated to its
// UTC calendar day and expressed relative to `epoch` (days since 1970-01-01).
std::optional<Day> parse_day(std::string_view text, Day epoch = 0);

// Parses one mention line. Returns nullopt for malformed input.
std::optional<MentionRecord> parse_mention_line(std::string_view line,
                                                MentionFormat format,
                                                Day epoch = 0);

// Streams records in file order to `sink`. Blank lines are ignored. In
// strict mode the first malformed line throws InputError naming its line
// number; in lenient mode it is counted and skipped.
ParseStats for_each_mention(std::istream& in, MentionFormat format,
                            ParseMode mode,
                            const std::function<void(MentionRecord&&)>& sink,
                            Day epoch = 0);

std::vector<MentionRecord> parse_mentions(std::istream& in,
                                          MentionFormat format,
                                          ParseMode mode,
                                          ParseStats* stats = nullptr,
                                          Day epoch = 0);

// Metadata rows: entity_id \t creation_day \t type1,type2,... \t pageviews.
// Duplicate entity ids are an input error in both modes.
std::vector<EntityMeta> parse_metadata(std::istream& in, ParseMode mode,
                                       ParseStats* stats = nullptr,
                                       Day epoch = 0);

// True iff the mention predates the entity's page creation.
inline bool is_emerging_mention(const MentionRecord& record,
                                const EntityMeta& meta) {
  return record.doc_day < meta.creation_day;
}

// Days between a pre-creation mention and the page creation (>= 1 for
// emerging mentions).
inline Day days_before_incorporation(Day doc_day, Day creation_day) {
  return creation_day - doc_day;
}

// Per-day aggregate of one entity's mentions within one stream.
struct DayCount {
  Day day = 0;
  std::uint32_t docs = 0;         // distinct documents
  std::uint32_t occurrences = 0;  // mention records

  bool operator==(const DayCount&) const = default;
};

struct EmergingEntity {
  std::string entity_id;
  Day creation_day = 0;
  std::vector<std::string> type_labels;
  std::optional<std::uint64_t> pageviews;
  // Pre-creation activity, sorted by day, one row per active day.
  std::vector<DayCount> news;
  std::vector<DayCount> social;

  const std::vector<DayCount>& stream(Stream s) const {
    return s == Stream::kNews ? news : social;
  }
  std::optional<Day> first_day(Stream s) const;
  Day first_day() const;
  std::uint64_t document_count() const;
};

struct Dataset {
  DaySpan span;
  int min_docs = 5;
  std::vector<EmergingEntity> entities;  // sorted by entity_id

  const EmergingEntity* find(std::string_view entity_id) const;
};

enum class CascadeStage : int {
  kAnnotated = 0,     // every in-span mention record
  kLinked = 1,        // entity has metadata
  kPreCreation = 2,   // doc_day < creation_day
  kCreatedInSpan = 3, // span.start < creation_day <= span.end
  kMinDocs = 4,       // >= min_docs distinct pre-creation documents
};
inline constexpr int kNumCascadeStages = 5;
std::string_view stage_name(CascadeStage s);

struct StageCounts {
  std::uint64_t entities = 0;
  std::uint64_t mentions = 0;
  std::uint64_t documents = 0;

  bool operator==(const StageCounts&) const = default;
};

struct FilterReport {
  DaySpan span;
  int min_docs = 5;
  std::array<StageCounts, kNumCascadeStages> stages{};
  std::uint64_t mentions_out_of_span = 0;
  std::uint64_t mentions_without_meta = 0;
  std::uint64_t entities_without_meta = 0;

  const StageCounts& at(CascadeStage s) const {
    return stages[static_cast<int>(s)];
  }
  bool operator==(const FilterReport&) const = default;
};

struct BuildResult {
  Dataset dataset;
  FilterReport report;
};

// Aggregates a mention stream. Add() is order-independent, and Merge() is
// associative and commutative, so a stream can be sharded (e.g. by entity id
// hash), built in parallel and merged. Documents are identified by
// (stream, doc_id); a document seen on several days keeps its earliest day.
class DatasetBuilder {
 public:
  DatasetBuilder(DaySpan span, int min_docs);

  void Add(const MentionRecord& record);
  void Merge(const DatasetBuilder& other);
  BuildResult Finish(const std::vector<EntityMeta>& metas) const;

 private:
  std::uint32_t InternDoc(Stream stream, std::string_view doc_id,
                          std::int32_t day_offset);
  std::uint32_t InternEntity(std::string_view entity_id);

  DaySpan span_;
  int min_docs_;
  std::uint64_t out_of_span_ = 0;
  // Stable storage for interned keys; the maps hold views into it.
  std::deque<std::string> doc_names_;
  std::unordered_map<std::string_view, std::uint32_t> doc_index_;
  std::vector<std::int32_t> doc_first_;  // earliest day offset per document
  std::deque<std::string> entity_names_;
  std::unordered_map<std::string_view, std::uint32_t> entity_index_;
  // Interned document per mention record, grouped by entity.
  std::vector<std::vector<std::uint32_t>> records_;
};

// Convenience wrapper over DatasetBuilder.
BuildResult build_dataset(const std::vector<MentionRecord>& mentions,
                          const std::vector<EntityMeta>& metas, DaySpan span,
                          int min_docs);

std::string filter_report_json(const FilterReport& report);
std::string filter_report_csv(const FilterReport& report);

}  // namespace emerge

#endif  // EMERGE_INGEST_H_
