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

#include <doctest.h>

#include <sstream>

#include "emerge/bursts.h"
#include "emerge/ingest.h"
#include "emerge/synth.h"
#include "emerge/timeseries.h"
#include "oracles.h"

using namespace emerge;

namespace {

struct Corpus {
  std::vector<MentionRecord> records;
  std::vector<EntityMeta> metas;
  SynthManifest manifest;
};

Corpus make(const SynthConfig& c) {
  Corpus out;
  out.metas = generate_corpus(
      c, [&](const MentionRecord& r) { out.records.push_back(r); },
      &out.manifest);
  return out;
}

SynthConfig small_config() {
  SynthConfig c;
  c.n_early = 40;
  c.n_late = 40;
  c.n_no_meta = 5;
  c.n_post_creation = 5;
  c.n_after_span = 5;
  c.n_too_few = 5;
  c.n_unmentioned = 5;
  c.curiosity = true;
  c.seed = 11;
  return c;
}

}  // namespace

TEST_CASE("manifest predicts the filter report exactly") {
  for (std::uint64_t seed : {1, 2, 3}) {
    auto c = small_config();
    c.seed = seed;
    const auto corpus = make(c);
    CHECK(corpus.manifest.records == corpus.records.size());
    const auto built =
        build_dataset(corpus.records, corpus.metas, c.span, c.min_docs);
    CHECK(built.report == corpus.manifest.expected);
    CHECK(oracle::naive_cascade(corpus.records, corpus.metas, c.span,
                                c.min_docs) == corpus.manifest.expected);
    CHECK(built.dataset.entities.size() == c.n_early + c.n_late + 1);
  }
}

TEST_CASE("same seed gives identical bytes, another seed does not") {
  auto text = [](std::uint64_t seed) {
    auto c = small_config();
    c.seed = seed;
    std::string tsv;
    SynthManifest m;
    const auto metas = generate_corpus(
        c, [&](const MentionRecord& r) { tsv += mention_tsv_line(r); }, &m);
    return tsv + metadata_tsv(metas) + manifest_json(m);
  };
  CHECK(text(5) == text(5));
  CHECK(text(5) != text(6));
}

TEST_CASE("tsv lines parse back to the same records") {
  const auto corpus = make(small_config());
  std::string tsv;
  for (const auto& r : corpus.records) tsv += mention_tsv_line(r);
  std::istringstream in(tsv);
  const auto back = parse_mentions(in, MentionFormat::kTsv, ParseMode::kStrict);
  CHECK(back == corpus.records);
  std::istringstream meta_in(metadata_tsv(corpus.metas));
  const auto metas = parse_metadata(meta_in, ParseMode::kStrict);
  REQUIRE(metas.size() == corpus.metas.size());
  for (std::size_t i = 0; i < metas.size(); ++i) {
    CHECK(metas[i].entity_id == corpus.metas[i].entity_id);
    CHECK(metas[i].creation_day == corpus.metas[i].creation_day);
    CHECK(metas[i].type_labels == corpus.metas[i].type_labels);
    CHECK(metas[i].pageviews == corpus.metas[i].pageviews);
  }
}

TEST_CASE("archetypes have their mass where planted") {
  auto c = small_config();
  const auto corpus = make(c);
  const auto ds =
      build_dataset(corpus.records, corpus.metas, c.span, c.min_docs).dataset;
  for (const auto& t : corpus.manifest.entities) {
    if (t.category != PlantedCategory::kEmerging) continue;
    const auto s = build_series(ds, t.entity_id);
    CHECK(s.creation_day() == t.creation_day);
    CHECK(s.start_day == t.first_day);
    const std::size_t edge = s.values.size() * 15 / 100;
    std::int64_t head = 0, tail = 0;
    for (std::size_t i = 0; i < edge; ++i) head += s.values[i];
    for (std::size_t i = s.values.size() - edge; i < s.values.size(); ++i) {
      tail += s.values[i];
    }
    if (t.archetype == Archetype::kEarlyBurst) CHECK(head > tail);
    if (t.archetype == Archetype::kLateBurst) CHECK(tail > head);
  }
}

TEST_CASE("the two-burst entity bursts near both ends") {
  auto c = small_config();
  const auto corpus = make(c);
  const auto ds =
      build_dataset(corpus.records, corpus.metas, c.span, c.min_docs).dataset;
  const auto s = build_series(ds, "Curiosity_(rover)");
  const auto bs = detect_bursts(s.as_double());
  REQUIRE(bs.bursts.size() >= 2);
  const double len = static_cast<double>(s.values.size());
  bool early = false, late = false;
  for (const auto& b : bs.bursts) {
    const double mid = (b.start + b.end) / 2.0 / len;
    early |= mid > 0.05 && mid < 0.15;
    late |= mid > 0.9;
  }
  CHECK(early);
  CHECK(late);
}
