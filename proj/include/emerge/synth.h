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

// Synthetic mention corpora with known ground truth.
//
// Emerging entities follow one of two archetypes: early-burst (mass
// concentrated right after the first mention, a weaker burst before
// incorporation) and late-burst (a quiet start, a gradual build-up and a
// dominant burst just before incorporation). Entities that violate one
// filtering predicate each are planted alongside, and the manifest records
// the cascade counts implied by construction.

#ifndef EMERGE_SYNTH_H_
#define EMERGE_SYNTH_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "emerge/ingest.h"

namespace emerge {

enum class Archetype { kEarlyBurst, kLateBurst, kCuriosity };

enum class PlantedCategory {
  kEmerging,          // passes every filter
  kNoMeta,            // no metadata row
  kPostCreationOnly,  // mentioned only on or after page creation
  kCreatedAfterSpan,  // page created after the corpus ends
  kTooFewDocs,        // fewer than min_docs pre-creation documents
  kUnmentioned,       // metadata row only
};

std::string_view archetype_name(Archetype a);
std::string_view category_name(PlantedCategory c);

struct TypeSpec {
  std::string name;
  double probability = 0.0;
  double pageview_median = 1000.0;
};

struct SynthConfig {
  DaySpan span{0, 571};
  int min_docs = 5;
  std::size_t n_early = 500;
  std::size_t n_late = 500;
  std::size_t n_no_meta = 0;
  std::size_t n_post_creation = 0;
  std::size_t n_after_span = 0;
  std::size_t n_too_few = 0;
  std::size_t n_unmentioned = 0;
  bool curiosity = false;  // add one two-burst entity
  int min_duration = 60;
  int max_duration = 400;
  double rate_scale = 1.0;       // multiplies every daily rate
  double duplicate_rate = 0.1;   // chance a document repeats its mention
  double post_creation_docs = 2.0;  // mean post-creation documents
  double news_only = 0.12;
  double social_only = 0.29;
  std::vector<TypeSpec> types = default_types();
  std::uint64_t seed = 1;

  static std::vector<TypeSpec> default_types();
};

struct EntityTruth {
  std::string entity_id;
  PlantedCategory category = PlantedCategory::kEmerging;
  Archetype archetype = Archetype::kEarlyBurst;
  Day creation_day = 0;
  Day first_day = 0;
  std::uint64_t pre_creation_docs = 0;
};

struct SynthManifest {
  FilterReport expected;
  std::vector<EntityTruth> entities;
  std::uint64_t records = 0;
};

using MentionSink = std::function<void(const MentionRecord&)>;

// Streams mention records to `sink` (entity by entity) and returns the
// metadata table. Same config and seed give the same output.
std::vector<EntityMeta> generate_corpus(const SynthConfig& config,
                                        const MentionSink& sink,
                                        SynthManifest* manifest);

std::string mention_tsv_line(const MentionRecord& r);
std::string metadata_tsv(const std::vector<EntityMeta>& metas);
std::string manifest_json(const SynthManifest& manifest);

}  // namespace emerge

#endif  // EMERGE_SYNTH_H_
