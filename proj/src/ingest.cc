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

#include "emerge/ingest.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <map>
#include <numeric>
#include <unordered_set>

#include <fmt/format.h>
#include <json.hpp>

namespace emerge {

namespace {

template <typename T>
std::optional<T> to_number(std::string_view s) {
  T v{};
  if (s.empty()) return std::nullopt;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// Splits on '\t' into exactly `out.size()` fields; returns the field count
// actually present.
std::size_t split_tabs(std::string_view line, std::string_view* out,
                       std::size_t max_fields) {
  std::size_t n = 0;
  std::size_t pos = 0;
  while (n < max_fields) {
    auto tab = line.find('\t', pos);
    if (tab == std::string_view::npos) {
      out[n++] = line.substr(pos);
      return n;
    }
    out[n++] = line.substr(pos, tab - pos);
    pos = tab + 1;
  }
  return max_fields + 1;  // too many fields
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return c == ' ' || c == '\t'; });
}

std::optional<int> two_digits(std::string_view s, std::size_t at) {
  if (at + 2 > s.size()) return std::nullopt;
  return to_number<int>(s.substr(at, 2));
}

}  // namespace

std::optional<Day> parse_day(std::string_view text, Day epoch) {
  if (auto v = to_number<Day>(text)) return *v;
  // ISO-8601: YYYY-MM-DD[(T| )HH:MM[:SS[.fff]][Z|(+|-)HH:MM]]
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') {
    return std::nullopt;
  }
  auto y = to_number<int>(text.substr(0, 4));
  auto m = two_digits(text, 5);
  auto d = two_digits(text, 8);
  if (!y || !m || !d) return std::nullopt;
  using namespace std::chrono;
  year_month_day ymd{year{*y}, month{static_cast<unsigned>(*m)},
                     day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  std::int64_t seconds =
      static_cast<std::int64_t>(sys_days{ymd}.time_since_epoch().count()) *
      86400;
  std::string_view rest = text.substr(10);
  if (!rest.empty()) {
    if (rest[0] != 'T' && rest[0] != ' ') return std::nullopt;
    auto hh = two_digits(rest, 1);
    if (!hh || rest.size() < 6 || rest[3] != ':') return std::nullopt;
    auto mm = two_digits(rest, 4);
    if (!mm) return std::nullopt;
    seconds += *hh * 3600 + *mm * 60;
    std::size_t pos = 6;
    if (pos < rest.size() && rest[pos] == ':') {
      auto ss = two_digits(rest, pos + 1);
      if (!ss) return std::nullopt;
      seconds += *ss;
      pos += 3;
      if (pos < rest.size() && rest[pos] == '.') {
        ++pos;
        while (pos < rest.size() && rest[pos] >= '0' && rest[pos] <= '9') ++pos;
      }
    }
    std::string_view zone = rest.substr(pos);
    if (zone == "Z" || zone.empty()) {
      // UTC
    } else if ((zone[0] == '+' || zone[0] == '-') && zone.size() == 6 &&
               zone[3] == ':') {
      auto oh = two_digits(zone, 1);
      auto om = two_digits(zone, 4);
      if (!oh || !om) return std::nullopt;
      std::int64_t offset = *oh * 3600 + *om * 60;
      seconds += zone[0] == '+' ? -offset : offset;
    } else {
      return std::nullopt;
    }
  }
  // Floor division so pre-1970 times land on the right day.
  Day days = seconds / 86400;
  if (seconds % 86400 < 0) --days;
  return days - epoch;
}

std::optional<MentionRecord> parse_mention_line(std::string_view line,
                                                MentionFormat format,
                                                Day epoch) {
  MentionRecord rec;
  if (format == MentionFormat::kTsv) {
    std::string_view f[4];
    if (split_tabs(line, f, 4) != 4) return std::nullopt;
    auto day = parse_day(f[0], epoch);
    auto stream = parse_stream(f[2]);
    if (!day || !stream || f[1].empty() || f[3].empty()) return std::nullopt;
    rec.doc_day = *day;
    rec.doc_id = std::string(f[1]);
    rec.stream = *stream;
    rec.entity_id = std::string(f[3]);
    return rec;
  }
  auto j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (!j.is_object()) return std::nullopt;
  auto str = [&](const char* key) -> std::optional<std::string> {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) return std::nullopt;
    return it->get<std::string>();
  };
  auto day_it = j.find("doc_day");
  if (day_it == j.end()) return std::nullopt;
  std::optional<Day> day;
  if (day_it->is_number_integer()) {
    day = day_it->get<Day>();
  } else if (day_it->is_string()) {
    day = parse_day(day_it->get<std::string>(), epoch);
  }
  auto doc = str("doc_id");
  auto stream_text = str("stream");
  auto entity = str("entity_id");
  if (!day || !doc || !stream_text || !entity || doc->empty() ||
      entity->empty()) {
    return std::nullopt;
  }
  auto stream = parse_stream(*stream_text);
  if (!stream) return std::nullopt;
  rec.doc_day = *day;
  rec.doc_id = std::move(*doc);
  rec.stream = *stream;
  rec.entity_id = std::move(*entity);
  return rec;
}

ParseStats for_each_mention(std::istream& in, MentionFormat format,
                            ParseMode mode,
                            const std::function<void(MentionRecord&&)>& sink,
                            Day epoch) {
  if (!in) throw InputError("mention source is not readable");
  ParseStats stats;
  std::string line;
  while (std::getline(in, line)) {
    ++stats.lines;
    std::string_view view = strip_cr(line);
    if (is_blank(view)) continue;
    auto rec = parse_mention_line(view, format, epoch);
    if (!rec) {
      if (mode == ParseMode::kStrict) {
        throw InputError(
            fmt::format("malformed mention at line {}", stats.lines));
      }
      ++stats.malformed;
      continue;
    }
    ++stats.records;
    sink(std::move(*rec));
  }
  if (in.bad()) throw InputError("error reading mention source");
  return stats;
}

std::vector<MentionRecord> parse_mentions(std::istream& in,
                                          MentionFormat format,
                                          ParseMode mode, ParseStats* stats,
                                          Day epoch) {
  std::vector<MentionRecord> out;
  ParseStats s = for_each_mention(
      in, format, mode, [&](MentionRecord&& r) { out.push_back(std::move(r)); },
      epoch);
  if (stats) *stats = s;
  return out;
}

std::vector<EntityMeta> parse_metadata(std::istream& in, ParseMode mode,
                                       ParseStats* stats, Day epoch) {
  if (!in) throw InputError("metadata source is not readable");
  ParseStats s;
  std::vector<EntityMeta> out;
  std::unordered_set<std::string> seen;
  std::string line;
  while (std::getline(in, line)) {
    ++s.lines;
    std::string_view view = strip_cr(line);
    if (is_blank(view)) continue;
    std::string_view f[4];
    std::size_t nf = split_tabs(view, f, 4);
    std::optional<EntityMeta> meta;
    if ((nf == 3 || nf == 4) && !f[0].empty()) {
      auto day = parse_day(f[1], epoch);
      std::optional<std::uint64_t> views;
      bool views_ok = true;
      if (nf == 4 && !f[3].empty()) {
        views = to_number<std::uint64_t>(f[3]);
        views_ok = views.has_value();
      }
      if (day && views_ok) {
        meta.emplace();
        meta->entity_id = std::string(f[0]);
        meta->creation_day = *day;
        meta->pageviews = views;
        std::string_view types = f[2];
        while (!types.empty()) {
          auto comma = types.find(',');
          std::string_view label = types.substr(0, comma);
          if (!label.empty()) meta->type_labels.emplace_back(label);
          if (comma == std::string_view::npos) break;
          types.remove_prefix(comma + 1);
        }
        std::sort(meta->type_labels.begin(), meta->type_labels.end());
        meta->type_labels.erase(
            std::unique(meta->type_labels.begin(), meta->type_labels.end()),
            meta->type_labels.end());
      }
    }
    if (!meta) {
      if (mode == ParseMode::kStrict) {
        throw InputError(fmt::format("malformed metadata at line {}", s.lines));
      }
      ++s.malformed;
      continue;
    }
    if (!seen.insert(meta->entity_id).second) {
      throw InputError(fmt::format("duplicate metadata for entity '{}' at line {}",
                                   meta->entity_id, s.lines));
    }
    ++s.records;
    out.push_back(std::move(*meta));
  }
  if (in.bad()) throw InputError("error reading metadata source");
  if (stats) *stats = s;
  return out;
}

std::optional<Day> EmergingEntity::first_day(Stream s) const {
  const auto& rows = stream(s);
  if (rows.empty()) return std::nullopt;
  return rows.front().day;
}

Day EmergingEntity::first_day() const {
  auto a = first_day(Stream::kNews);
  auto b = first_day(Stream::kSocial);
  if (a && b) return std::min(*a, *b);
  return a ? *a : b.value_or(creation_day);
}

std::uint64_t EmergingEntity::document_count() const {
  std::uint64_t n = 0;
  for (const auto& r : news) n += r.docs;
  for (const auto& r : social) n += r.docs;
  return n;
}

const EmergingEntity* Dataset::find(std::string_view entity_id) const {
  auto it = std::lower_bound(
      entities.begin(), entities.end(), entity_id,
      [](const EmergingEntity& e, std::string_view id) {
        return e.entity_id < id;
      });
  if (it == entities.end() || it->entity_id != entity_id) return nullptr;
  return &*it;
}

std::string_view stage_name(CascadeStage s) {
  switch (s) {
    case CascadeStage::kAnnotated: return "annotated";
    case CascadeStage::kLinked: return "linked";
    case CascadeStage::kPreCreation: return "pre_creation";
    case CascadeStage::kCreatedInSpan: return "created_in_span";
    case CascadeStage::kMinDocs: return "min_docs";
  }
  return "?";
}

DatasetBuilder::DatasetBuilder(DaySpan span, int min_docs)
    : span_(span), min_docs_(min_docs) {
  if (!span.valid()) throw InputError("span start is after span end");
  if (min_docs < 1) throw InputError("min_docs must be >= 1");
}

std::uint32_t DatasetBuilder::InternDoc(Stream stream,
                                        std::string_view doc_id,
                                        std::int32_t day_offset) {
  std::string key;
  key.reserve(doc_id.size() + 1);
  key.push_back(stream == Stream::kNews ? 'n' : 's');
  key.append(doc_id);
  auto it = doc_index_.find(key);
  if (it != doc_index_.end()) {
    doc_first_[it->second] = std::min(doc_first_[it->second], day_offset);
    return it->second;
  }
  auto id = static_cast<std::uint32_t>(doc_names_.size());
  doc_names_.push_back(std::move(key));
  doc_index_.emplace(doc_names_.back(), id);
  doc_first_.push_back(day_offset);
  return id;
}

std::uint32_t DatasetBuilder::InternEntity(std::string_view entity_id) {
  auto it = entity_index_.find(entity_id);
  if (it != entity_index_.end()) return it->second;
  auto id = static_cast<std::uint32_t>(entity_names_.size());
  entity_names_.emplace_back(entity_id);
  entity_index_.emplace(entity_names_.back(), id);
  records_.emplace_back();
  return id;
}

void DatasetBuilder::Add(const MentionRecord& record) {
  if (!span_.contains(record.doc_day)) {
    ++out_of_span_;
    return;
  }
  std::uint32_t e = InternEntity(record.entity_id);
  records_[e].push_back(InternDoc(
      record.stream, record.doc_id,
      static_cast<std::int32_t>(record.doc_day - span_.start)));
}

void DatasetBuilder::Merge(const DatasetBuilder& other) {
  if (other.span_.start != span_.start || other.span_.end != span_.end ||
      other.min_docs_ != min_docs_) {
    throw InputError("cannot merge dataset builders with different settings");
  }
  out_of_span_ += other.out_of_span_;
  std::vector<std::uint32_t> doc_map(other.doc_names_.size());
  for (std::size_t i = 0; i < other.doc_names_.size(); ++i) {
    const std::string& key = other.doc_names_[i];
    Stream s = key[0] == 'n' ? Stream::kNews : Stream::kSocial;
    doc_map[i] = InternDoc(s, std::string_view(key).substr(1),
                           other.doc_first_[i]);
  }
  for (std::size_t e = 0; e < other.entity_names_.size(); ++e) {
    std::uint32_t mine = InternEntity(other.entity_names_[e]);
    auto& dst = records_[mine];
    for (std::uint32_t d : other.records_[e]) dst.push_back(doc_map[d]);
  }
}

BuildResult DatasetBuilder::Finish(const std::vector<EntityMeta>& metas) const {
  std::unordered_map<std::string_view, const EntityMeta*> meta_index;
  meta_index.reserve(metas.size());
  for (const auto& m : metas) meta_index.emplace(m.entity_id, &m);

  BuildResult result;
  FilterReport& report = result.report;
  report.span = span_;
  report.min_docs = min_docs_;
  report.mentions_out_of_span = out_of_span_;
  result.dataset.span = span_;
  result.dataset.min_docs = min_docs_;

  // Highest cascade stage reached by any mention of each document.
  std::vector<std::int8_t> doc_stage(doc_names_.size(), -1);
  // Pre-creation records of one entity, sorted by document. A document is
  // dated by its earliest day, so all of its records fall on one side of
  // the creation day.
  std::vector<std::uint32_t> sorted;

  for (std::size_t e = 0; e < entity_names_.size(); ++e) {
    const auto& recs = records_[e];
    auto it = meta_index.find(entity_names_[e]);
    const EntityMeta* meta = it == meta_index.end() ? nullptr : it->second;

    int entity_stage = 0;
    std::uint64_t pre_records = 0;
    if (meta == nullptr) {
      ++report.entities_without_meta;
      report.mentions_without_meta += recs.size();
    } else {
      entity_stage = 1;
      const Day creation_offset = meta->creation_day - span_.start;
      sorted.clear();
      for (std::uint32_t d : recs) {
        if (doc_first_[d] < creation_offset) sorted.push_back(d);
      }
      pre_records = sorted.size();
      std::sort(sorted.begin(), sorted.end());
      std::size_t distinct = 0;
      for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i == 0 || sorted[i] != sorted[i - 1]) ++distinct;
      }
      if (distinct > 0) {
        entity_stage = 2;
        if (meta->creation_day > span_.start &&
            meta->creation_day <= span_.end) {
          entity_stage = 3;
          if (distinct >= static_cast<std::size_t>(min_docs_)) entity_stage = 4;
        }
      }
      if (entity_stage == 4) {
        EmergingEntity out;
        out.entity_id = entity_names_[e];
        out.creation_day = meta->creation_day;
        out.type_labels = meta->type_labels;
        out.pageviews = meta->pageviews;
        std::map<Day, DayCount> per_stream[2];
        for (std::size_t i = 0; i < sorted.size();) {
          std::size_t j = i;
          while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
          const Day day = span_.start + doc_first_[sorted[i]];
          const int s = doc_names_[sorted[i]][0] == 'n' ? 0 : 1;
          DayCount& dc = per_stream[s][day];
          dc.day = day;
          dc.docs += 1;
          dc.occurrences += static_cast<std::uint32_t>(j - i);
          i = j;
        }
        for (auto& [day, dc] : per_stream[0]) out.news.push_back(dc);
        for (auto& [day, dc] : per_stream[1]) out.social.push_back(dc);
        result.dataset.entities.push_back(std::move(out));
      }
    }

    for (int s = 0; s <= entity_stage; ++s) report.stages[s].entities += 1;
    report.stages[0].mentions += recs.size();
    if (meta != nullptr) report.stages[1].mentions += recs.size();
    for (int s = 2; s <= entity_stage; ++s) {
      report.stages[s].mentions += pre_records;
    }
    for (std::uint32_t d : recs) {
      int stage = 0;
      if (meta != nullptr) {
        stage = doc_first_[d] < meta->creation_day - span_.start ? entity_stage
                                                                 : 1;
      }
      doc_stage[d] =
          std::max<std::int8_t>(doc_stage[d], static_cast<std::int8_t>(stage));
    }
  }
  for (std::int8_t top : doc_stage) {
    for (int s = 0; s <= top; ++s) report.stages[s].documents += 1;
  }
  std::sort(result.dataset.entities.begin(), result.dataset.entities.end(),
            [](const EmergingEntity& a, const EmergingEntity& b) {
              return a.entity_id < b.entity_id;
            });
  return result;
}

BuildResult build_dataset(const std::vector<MentionRecord>& mentions,
                          const std::vector<EntityMeta>& metas, DaySpan span,
                          int min_docs) {
  DatasetBuilder builder(span, min_docs);
  for (const auto& m : mentions) builder.Add(m);
  return builder.Finish(metas);
}

std::string filter_report_json(const FilterReport& report) {
  nlohmann::ordered_json j;
  j["span"] = {report.span.start, report.span.end};
  j["min_docs"] = report.min_docs;
  auto stages = nlohmann::ordered_json::array();
  for (int s = 0; s < kNumCascadeStages; ++s) {
    const auto& c = report.stages[s];
    nlohmann::ordered_json row;
    row["stage"] = stage_name(static_cast<CascadeStage>(s));
    row["entities"] = c.entities;
    row["mentions"] = c.mentions;
    row["documents"] = c.documents;
    stages.push_back(std::move(row));
  }
  j["stages"] = std::move(stages);
  j["excluded"] = {{"mentions_out_of_span", report.mentions_out_of_span},
                   {"mentions_without_meta", report.mentions_without_meta},
                   {"entities_without_meta", report.entities_without_meta}};
  return j.dump(2);
}

std::string filter_report_csv(const FilterReport& report) {
  // Coverage columns are relative to the preceding stage, as in the
  // acquisition table.
  auto pct = [](std::uint64_t cur, std::uint64_t prev) -> std::string {
    if (prev == 0) return "";
    return fmt::format("{:.1f}", 100.0 * static_cast<double>(cur) /
                                     static_cast<double>(prev));
  };
  std::string out =
      "stage,entities,entities_coverage_pct,mentions,mentions_coverage_pct,"
      "documents,documents_coverage_pct\n";
  for (int s = 0; s < kNumCascadeStages; ++s) {
    const auto& c = report.stages[s];
    std::string e_pct, m_pct, d_pct;
    if (s > 0) {
      const auto& p = report.stages[s - 1];
      e_pct = pct(c.entities, p.entities);
      m_pct = pct(c.mentions, p.mentions);
      d_pct = pct(c.documents, p.documents);
    }
    out += fmt::format("{},{},{},{},{},{},{}\n",
                       stage_name(static_cast<CascadeStage>(s)), c.entities,
                       e_pct, c.mentions, m_pct, c.documents, d_pct);
  }
  return out;
}

}  // namespace emerge
