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

#include "emerge/synth.h"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>
#include <json.hpp>

namespace emerge {

std::string_view archetype_name(Archetype a) {
  switch (a) {
    case Archetype::kEarlyBurst: return "early_burst";
    case Archetype::kLateBurst: return "late_burst";
    case Archetype::kCuriosity: return "two_burst";
  }
  return "?";
}

std::string_view category_name(PlantedCategory c) {
  switch (c) {
    case PlantedCategory::kEmerging: return "emerging";
    case PlantedCategory::kNoMeta: return "no_meta";
    case PlantedCategory::kPostCreationOnly: return "post_creation_only";
    case PlantedCategory::kCreatedAfterSpan: return "created_after_span";
    case PlantedCategory::kTooFewDocs: return "too_few_docs";
    case PlantedCategory::kUnmentioned: return "unmentioned";
  }
  return "?";
}

std::vector<TypeSpec> SynthConfig::default_types() {
  // Rough shape of a knowledge-base type mix: many untyped entities, people
  // dominating the typed ones.
  return {{"Person", 0.30, 900.0},      {"Organisation", 0.08, 700.0},
          {"Place", 0.05, 400.0},       {"Work", 0.04, 3000.0},
          {"Event", 0.03, 2500.0}};
}

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

std::uint32_t poisson(Rng& rng, double mean) {
  if (mean <= 0.0) return 0;
  return std::poisson_distribution<std::uint32_t>(mean)(rng);
}

// Expected daily document counts over `d` days of pre-creation life.
std::vector<double> archetype_rates(Archetype a, std::int64_t d, Rng& rng) {
  std::vector<double> rate(static_cast<std::size_t>(d), 0.0);
  const double h = uniform(rng, 4.0, 10.0);
  const double base = uniform(rng, 0.03, 0.08);
  auto span_len = [&](double frac, std::int64_t floor) {
    return std::min<std::int64_t>(d, std::max<std::int64_t>(
                                          floor, std::llround(frac * d)));
  };
  switch (a) {
    case Archetype::kEarlyBurst: {
      const std::int64_t w = span_len(0.05, 3);
      const std::int64_t tail = span_len(0.03, 2);
      for (std::int64_t t = 0; t < d; ++t) {
        double r = base;
        if (t < w) {
          r += h;
        } else {
          r += 0.25 * h * std::exp(-static_cast<double>(t - w) / (0.05 * d));
        }
        if (t >= d - tail) r += 0.3 * h;
        rate[t] = r;
      }
      break;
    }
    case Archetype::kLateBurst: {
      const std::int64_t w = span_len(0.05, 3);
      for (std::int64_t t = 0; t < d; ++t) {
        const double u = d > 1 ? static_cast<double>(t) / (d - 1) : 1.0;
        double r = base + 0.3 * h * u * u * u;
        if (t >= d - w) r += h;
        rate[t] = r;
      }
      break;
    }
    case Archetype::kCuriosity: {
      // Spikes near 10% and 95% of the pre-creation life.
      for (std::int64_t t = 0; t < d; ++t) rate[t] = base;
      for (double centre : {0.10, 0.95}) {
        const auto c = std::llround(centre * (d - 1));
        for (std::int64_t t = std::max<std::int64_t>(0, c - 2);
             t <= std::min<std::int64_t>(d - 1, c + 2); ++t) {
          rate[t] += 2.0 * h;
        }
      }
      break;
    }
  }
  return rate;
}

struct Emitter {
  const SynthConfig& config;
  const MentionSink& sink;
  Rng& rng;
  std::uint64_t records = 0;
  std::array<std::uint64_t, kNumCascadeStages> mentions{};
  std::array<std::uint64_t, kNumCascadeStages> documents{};

  // Emits one document with one or two mention records. `stage` is the
  // deepest cascade stage the document reaches, known from construction.
  void doc(const std::string& entity, const std::string& doc_id, Day day,
           Stream stream, int stage) {
    const int copies =
        std::bernoulli_distribution(config.duplicate_rate)(rng) ? 2 : 1;
    for (int c = 0; c < copies; ++c) {
      sink(MentionRecord{doc_id, day, stream, entity});
    }
    records += static_cast<std::uint64_t>(copies);
    for (int s = 0; s <= stage; ++s) documents[s] += 1;
    mentions[0] += static_cast<std::uint64_t>(copies);
    if (stage >= 1) mentions[1] += static_cast<std::uint64_t>(copies);
    // Pre-creation records are counted at every stage the entity reaches;
    // the caller tallies those since the entity stage decides the depth.
  }
};

// How an entity spreads its documents over the two streams.
struct StreamPlan {
  enum Kind { kBoth, kNewsOnly, kSocialOnly } kind = kBoth;
  Stream first = Stream::kNews;
  std::int64_t lag = 0;  // day the second stream may start

  Stream initial() const {
    if (kind == kNewsOnly) return Stream::kNews;
    if (kind == kSocialOnly) return Stream::kSocial;
    return first;
  }

  Stream pick(std::int64_t t, Rng& rng) const {
    if (kind == kNewsOnly) return Stream::kNews;
    if (kind == kSocialOnly) return Stream::kSocial;
    if (t < lag) return first;
    return std::bernoulli_distribution(0.5)(rng) ? Stream::kNews
                                                 : Stream::kSocial;
  }
};

StreamPlan plan_streams(const SynthConfig& config, std::int64_t d, Rng& rng) {
  StreamPlan p;
  const double u = uniform(rng, 0.0, 1.0);
  if (u < config.news_only) {
    p.kind = StreamPlan::kNewsOnly;
  } else if (u < config.news_only + config.social_only) {
    p.kind = StreamPlan::kSocialOnly;
  } else {
    p.first = std::bernoulli_distribution(0.5)(rng) ? Stream::kNews
                                                    : Stream::kSocial;
    p.lag = d > 1 ? uniform_int(rng, 0, std::max<std::int64_t>(0, d / 3))
                  : 0;
  }
  return p;
}

void assign_types(const SynthConfig& config, EntityMeta& meta, Rng& rng) {
  double pv_median = 200.0;
  for (const TypeSpec& t : config.types) {
    if (uniform(rng, 0.0, 1.0) < t.probability) {
      meta.type_labels.push_back(t.name);
      pv_median = std::max(pv_median, t.pageview_median);
    }
  }
  std::sort(meta.type_labels.begin(), meta.type_labels.end());
  if (uniform(rng, 0.0, 1.0) < 0.9) {
    std::lognormal_distribution<double> pv(std::log(pv_median), 1.0);
    meta.pageviews = static_cast<std::uint64_t>(std::llround(pv(rng)));
  }
}

}  // namespace

std::vector<EntityMeta> generate_corpus(const SynthConfig& config,
                                        const MentionSink& sink,
                                        SynthManifest* manifest) {
  if (!config.span.valid() || config.span.end - config.span.start < 10) {
    throw InputError("synthetic span must cover at least 10 days");
  }
  if (config.min_docs < 1) throw InputError("min_docs must be >= 1");
  if (config.min_duration < 2 || config.max_duration < config.min_duration) {
    throw InputError("invalid synthetic duration range");
  }
  const DaySpan span = config.span;
  const std::int64_t span_days = span.end - span.start + 1;
  // Leave room for creation strictly after the span start.
  const std::int64_t max_d =
      std::min<std::int64_t>(config.max_duration, span_days - 2);
  const std::int64_t min_d = std::min<std::int64_t>(config.min_duration, max_d);

  Rng rng(config.seed);
  Emitter em{config, sink, rng};
  std::vector<EntityMeta> metas;
  std::vector<EntityTruth> truths;
  std::array<std::uint64_t, kNumCascadeStages> entities{};
  std::uint64_t out_of_span = 0, without_meta_mentions = 0, without_meta = 0;

  struct Plan {
    PlantedCategory category;
    Archetype archetype;
  };
  std::vector<Plan> plans;
  auto push = [&](std::size_t n, PlantedCategory c, Archetype a) {
    for (std::size_t i = 0; i < n; ++i) plans.push_back({c, a});
  };
  push(config.n_early, PlantedCategory::kEmerging, Archetype::kEarlyBurst);
  push(config.n_late, PlantedCategory::kEmerging, Archetype::kLateBurst);
  if (config.curiosity) {
    push(1, PlantedCategory::kEmerging, Archetype::kCuriosity);
  }
  push(config.n_no_meta, PlantedCategory::kNoMeta, Archetype::kEarlyBurst);
  push(config.n_post_creation, PlantedCategory::kPostCreationOnly,
       Archetype::kEarlyBurst);
  push(config.n_after_span, PlantedCategory::kCreatedAfterSpan,
       Archetype::kLateBurst);
  push(config.n_too_few, PlantedCategory::kTooFewDocs, Archetype::kEarlyBurst);
  push(config.n_unmentioned, PlantedCategory::kUnmentioned,
       Archetype::kEarlyBurst);
  // Interleave categories so ids carry no hint of the planted class.
  std::shuffle(plans.begin(), plans.end(), rng);

  const int width = plans.size() < 10 ? 1 : static_cast<int>(
      std::floor(std::log10(static_cast<double>(plans.size() - 1)))) + 1;

  for (std::size_t idx = 0; idx < plans.size(); ++idx) {
    const Plan& plan = plans[idx];
    EntityTruth truth;
    truth.entity_id = plan.archetype == Archetype::kCuriosity
                          ? std::string("Curiosity_(rover)")
                          : fmt::format("Q{:0{}}", idx, width);
    truth.category = plan.category;
    truth.archetype = plan.archetype;
    const std::string& id = truth.entity_id;
    std::uint64_t doc_seq = 0;
    auto next_doc = [&] { return fmt::format("{}-d{}", id, doc_seq++); };

    EntityMeta meta;
    meta.entity_id = id;
    assign_types(config, meta, rng);

    int entity_stage = 0;
    std::uint64_t pre_records_before = 0;
    switch (plan.category) {
      case PlantedCategory::kEmerging:
      case PlantedCategory::kCreatedAfterSpan:
      case PlantedCategory::kTooFewDocs: {
        std::int64_t d = plan.archetype == Archetype::kCuriosity
                             ? std::min<std::int64_t>(300, max_d)
                             : uniform_int(rng, min_d, max_d);
        Day creation, first;
        if (plan.category == PlantedCategory::kCreatedAfterSpan) {
          // Pre-creation activity stays inside the span; only the page
          // creation falls beyond it.
          creation = span.end + uniform_int(rng, 1, 60);
          first = uniform_int(rng, span.start, span.end - d + 1);
        } else {
          creation = uniform_int(rng, span.start + d, span.end);
          first = creation - d;
        }
        meta.creation_day = creation;
        truth.creation_day = creation;
        truth.first_day = first;
        const int pre_stage =
            plan.category == PlantedCategory::kEmerging          ? 4
            : plan.category == PlantedCategory::kTooFewDocs      ? 3
                                                                 : 2;
        entity_stage = pre_stage;
        const StreamPlan streams = plan_streams(config, d, rng);
        const std::uint64_t records_before = em.records;

        std::vector<std::uint32_t> per_day(static_cast<std::size_t>(d), 0);
        if (plan.category == PlantedCategory::kTooFewDocs) {
          const auto n = uniform_int(rng, 1, config.min_docs - 1);
          per_day[0] = 1;
          for (std::int64_t i = 1; i < n; ++i) {
            per_day[uniform_int(rng, 0, d - 1)] += 1;
          }
        } else {
          const auto rates = archetype_rates(plan.archetype, d, rng);
          std::uint64_t total = 0;
          for (std::int64_t t = 0; t < d; ++t) {
            per_day[t] = poisson(rng, rates[t] * config.rate_scale);
            total += per_day[t];
          }
          if (per_day[0] == 0) {
            per_day[0] = 1;
            ++total;
          }
          while (total < static_cast<std::uint64_t>(config.min_docs)) {
            per_day[uniform_int(rng, 0, d - 1)] += 1;
            ++total;
          }
        }
        // Guarantee the second stream appears at least once.
        bool seen[2] = {false, false};
        for (std::int64_t t = 0; t < d; ++t) {
          for (std::uint32_t k = 0; k < per_day[t]; ++k) {
            const Stream s =
                t == 0 && k == 0 ? streams.initial() : streams.pick(t, rng);
            seen[static_cast<int>(s)] = true;
            em.doc(id, next_doc(), first + t, s, pre_stage);
            truth.pre_creation_docs += 1;
          }
        }
        // Too-few entities keep their exact document count.
        if (streams.kind == StreamPlan::kBoth &&
            plan.category != PlantedCategory::kTooFewDocs) {
          const Stream other = streams.first == Stream::kNews ? Stream::kSocial
                                                              : Stream::kNews;
          if (!seen[static_cast<int>(other)]) {
            em.doc(id, next_doc(), first + std::min(streams.lag, d - 1), other,
                   pre_stage);
            truth.pre_creation_docs += 1;
          }
        }
        pre_records_before = em.records - records_before;

        // Post-creation chatter, still inside the span.
        if (creation <= span.end) {
          const auto n = poisson(rng, config.post_creation_docs);
          for (std::uint32_t i = 0; i < n; ++i) {
            const Day day = uniform_int(rng, creation, span.end);
            em.doc(id, next_doc(), day,
                   std::bernoulli_distribution(0.5)(rng) ? Stream::kNews
                                                         : Stream::kSocial,
                   1);
          }
        }
        break;
      }
      case PlantedCategory::kPostCreationOnly: {
        const Day creation = uniform_int(rng, span.start + 1, span.end - 5);
        meta.creation_day = creation;
        truth.creation_day = creation;
        truth.first_day = creation;
        entity_stage = 1;
        const auto n = 1 + poisson(rng, 6.0);
        for (std::uint32_t i = 0; i < n; ++i) {
          const Day day = i == 0 ? creation : uniform_int(rng, creation, span.end);
          em.doc(id, next_doc(), day, Stream::kNews, 1);
        }
        break;
      }
      case PlantedCategory::kNoMeta: {
        entity_stage = 0;
        ++without_meta;
        const std::uint64_t before = em.records;
        const auto n = 1 + poisson(rng, 6.0);
        for (std::uint32_t i = 0; i < n; ++i) {
          em.doc(id, next_doc(), uniform_int(rng, span.start, span.end),
                 std::bernoulli_distribution(0.5)(rng) ? Stream::kNews
                                                       : Stream::kSocial,
                 0);
        }
        without_meta_mentions += em.records - before;
        truth.first_day = span.start;
        break;
      }
      case PlantedCategory::kUnmentioned:
        meta.creation_day = uniform_int(rng, span.start + 1, span.end);
        truth.creation_day = meta.creation_day;
        entity_stage = -1;
        break;
    }

    // Pre-creation mention records are counted at stages 2..entity_stage.
    for (int s = 2; s <= entity_stage; ++s) em.mentions[s] += pre_records_before;
    for (int s = 0; s <= entity_stage; ++s) entities[s] += 1;

    // A few mentions dated outside the span; they must not count anywhere.
    if (plan.category == PlantedCategory::kEmerging &&
        std::bernoulli_distribution(0.02)(rng)) {
      sink(MentionRecord{next_doc(), span.start - uniform_int(rng, 1, 30),
                         Stream::kNews, id});
      ++out_of_span;
      ++em.records;
    }

    if (plan.category != PlantedCategory::kNoMeta) {
      metas.push_back(std::move(meta));
    }
    truths.push_back(std::move(truth));
  }

  if (manifest != nullptr) {
    FilterReport& r = manifest->expected;
    r = FilterReport{};
    r.span = span;
    r.min_docs = config.min_docs;
    for (int s = 0; s < kNumCascadeStages; ++s) {
      r.stages[s] = StageCounts{entities[s], em.mentions[s], em.documents[s]};
    }
    r.mentions_out_of_span = out_of_span;
    r.mentions_without_meta = without_meta_mentions;
    r.entities_without_meta = without_meta;
    manifest->entities = std::move(truths);
    manifest->records = em.records;
  }
  std::sort(metas.begin(), metas.end(),
            [](const EntityMeta& a, const EntityMeta& b) {
              return a.entity_id < b.entity_id;
            });
  return metas;
}

std::string mention_tsv_line(const MentionRecord& r) {
  return fmt::format("{}\t{}\t{}\t{}\n", r.doc_day, r.doc_id,
                     stream_name(r.stream), r.entity_id);
}

std::string metadata_tsv(const std::vector<EntityMeta>& metas) {
  std::string out;
  for (const EntityMeta& m : metas) {
    std::string types;
    for (std::size_t i = 0; i < m.type_labels.size(); ++i) {
      if (i) types += ',';
      types += m.type_labels[i];
    }
    out += fmt::format("{}\t{}\t{}\t{}\n", m.entity_id, m.creation_day, types,
                       m.pageviews ? std::to_string(*m.pageviews) : "");
  }
  return out;
}

std::string manifest_json(const SynthManifest& manifest) {
  nlohmann::ordered_json j;
  j["records"] = manifest.records;
  j["expected_filter_report"] =
      nlohmann::ordered_json::parse(filter_report_json(manifest.expected));
  auto ents = nlohmann::ordered_json::array();
  for (const EntityTruth& t : manifest.entities) {
    nlohmann::ordered_json e;
    e["entity_id"] = t.entity_id;
    e["category"] = category_name(t.category);
    if (t.category != PlantedCategory::kNoMeta) {
      e["creation_day"] = t.creation_day;
    }
    if (t.category == PlantedCategory::kEmerging ||
        t.category == PlantedCategory::kCreatedAfterSpan ||
        t.category == PlantedCategory::kTooFewDocs) {
      e["archetype"] = archetype_name(t.archetype);
      e["first_day"] = t.first_day;
      e["pre_creation_docs"] = t.pre_creation_docs;
    }
    ents.push_back(std::move(e));
  }
  j["entities"] = std::move(ents);
  return j.dump(2);
}

}  // namespace emerge
