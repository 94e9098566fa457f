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

#include "emerge/pipeline.h"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include <fmt/format.h>

#include "emerge/analysis.h"
#include "emerge/artifacts.h"
#include "emerge/clustering.h"
#include "emerge/svg.h"

namespace emerge {

using ojson = nlohmann::ordered_json;

namespace {

template <typename... Args>
void progress(const PipelineConfig& c, std::string_view stage,
              fmt::format_string<Args...> f, Args&&... args) {
  if (c.quiet) return;
  fmt::print(stderr, "[{}] {}\n", stage,
             fmt::format(f, std::forward<Args>(args)...));
}

std::string_view count_mode_name(CountMode m) {
  return m == CountMode::kDocuments ? "documents" : "occurrences";
}

std::string_view variant_name(BsimVariant v) {
  return v == BsimVariant::kJaccard ? "jaccard" : "peak_weighted";
}

MentionFormat mention_format(const PipelineConfig& c) {
  if (c.format) return *c.format;
  const auto ext = c.mentions.extension();
  return ext == ".jsonl" || ext == ".json" ? MentionFormat::kJsonLines
                                           : MentionFormat::kTsv;
}

// Stable across platforms, unlike std::hash.
std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 1469598103934665603ull) {
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

ojson build_params(const PipelineConfig& c) {
  ojson p;
  p["stage"] = "build";
  p["span"] = {c.span->start, c.span->end};
  p["epoch"] = c.epoch;
  p["min_docs"] = c.min_docs;
  p["format"] = mention_format(c) == MentionFormat::kTsv ? "tsv" : "jsonl";
  p["strict"] = c.strict;
  p["count_mode"] = count_mode_name(c.count_mode);
  p["max_entities"] = c.max_entities;
  if (c.max_entities > 0) p["seed"] = c.seed;
  return p;
}

ojson bursts_params(const PipelineConfig& c) {
  ojson p;
  p["stage"] = "bursts";
  p["window"] = c.window;
  p["cutoff_sigma"] = c.cutoff_sigma;
  p["threshold_mode"] = c.threshold_mode == ThresholdMode::kMeanCentered
                            ? "mean_centered"
                            : "bare_sigma";
  p["count_mode"] = count_mode_name(c.count_mode);
  return p;
}

ojson cluster_params(const PipelineConfig& c) {
  ojson p;
  p["stage"] = "cluster";
  p["bsim"] = variant_name(c.variant);
  return p;
}

ojson signature_params(const PipelineConfig& c) {
  ojson p;
  p["stage"] = "signatures";
  p["cuts"] = c.cuts;
  p["sig_length"] = c.sig_length ? ojson(*c.sig_length) : ojson("auto");
  p["sig_max_length"] = c.sig_max_length;
  return p;
}

ojson stats_params(const PipelineConfig& c) {
  ojson p;
  p["stage"] = "stats";
  p["cuts"] = c.cuts;
  p["alpha"] = c.alpha;
  return p;
}

ojson streams_params(const PipelineConfig& c) {
  ojson p;
  p["stage"] = "streams";
  p["alpha"] = c.alpha;
  p["sig_length"] = c.sig_length ? ojson(*c.sig_length) : ojson("auto");
  p["sig_max_length"] = c.sig_max_length;
  return p;
}

ojson types_params(const PipelineConfig& c) {
  ojson p;
  p["stage"] = "types";
  p["type_min_count"] = c.type_min_count;
  return p;
}

ojson input_entry(const fs::path& path) {
  ojson j;
  j["name"] = path.filename().string();
  j["sha256"] = sha256_file(path);
  return j;
}

// The manifest lists inputs and outputs by file name and checksum. It holds
// no timestamps, paths or worker counts, so reruns are byte-identical.
void write_manifest(StagedOutput& out, const std::string& stage,
                    const std::string& hash, const ojson& params,
                    const ojson& inputs, const ojson& counts,
                    const std::vector<fs::path>& kept = {}) {
  ojson m;
  m["stage"] = stage;
  m["config_hash"] = hash;
  m["params"] = params;
  m["inputs"] = inputs;
  m["counts"] = counts;
  auto outputs = ojson::array();
  // Files reused from an earlier run are listed like fresh ones.
  for (const fs::path& p : kept) {
    outputs.push_back({{"name", p.filename().string()}, {"sha256", sha256_file(p)}});
  }
  for (const auto& [name, tmp] : out.entries()) {
    outputs.push_back({{"name", name}, {"sha256", sha256_file(tmp)}});
  }
  m["outputs"] = std::move(outputs);
  out.Write(fmt::format("manifest_{}.json", stage), m.dump(2) + "\n");
}

ParseMode parse_mode(const PipelineConfig& c) {
  return c.strict ? ParseMode::kStrict : ParseMode::kLenient;
}

void require_file(const fs::path& p, std::string_view what) {
  if (p.empty()) throw UsageError(fmt::format("missing {} path", what));
  if (!fs::is_regular_file(p)) {
    throw InputError(fmt::format("{} file not found: {}", what, p.string()));
  }
}

// Keeps the `max` entities with the smallest seeded hash.
void subsample(Dataset& ds, std::size_t max, std::uint64_t seed) {
  if (max == 0 || ds.entities.size() <= max) return;
  const std::string salt = fmt::format("{}:", seed);
  std::vector<std::pair<std::uint64_t, std::size_t>> keyed;
  keyed.reserve(ds.entities.size());
  for (std::size_t i = 0; i < ds.entities.size(); ++i) {
    keyed.emplace_back(fnv1a(ds.entities[i].entity_id, fnv1a(salt)), i);
  }
  std::sort(keyed.begin(), keyed.end());
  keyed.resize(max);
  std::vector<std::size_t> keep;
  for (const auto& [h, i] : keyed) keep.push_back(i);
  std::sort(keep.begin(), keep.end());
  std::vector<EmergingEntity> kept;
  kept.reserve(max);
  for (std::size_t i : keep) kept.push_back(std::move(ds.entities[i]));
  ds.entities = std::move(kept);
}

struct Loaded {
  Dataset dataset;
  std::string dataset_hash;
  std::vector<EmergenceSeries> series;
};

Loaded load_dataset(const PipelineConfig& c) {
  Loaded l;
  l.dataset = read_dataset_jsonl(c.out_dir / "dataset.jsonl", &l.dataset_hash);
  // The build parameters recorded in the dataset must match this run.
  if (l.dataset.min_docs != c.min_docs ||
      (c.span && !(l.dataset.span == *c.span))) {
    throw InputError(fmt::format(
        "dataset.jsonl was built with span {}:{} and min_docs {}; rerun build",
        l.dataset.span.start, l.dataset.span.end, l.dataset.min_docs));
  }
  l.series = build_all_series(l.dataset, c.count_mode, c.workers);
  return l;
}

// Reads bursts.jsonl and checks that it was computed from this dataset with
// this configuration.
std::vector<EntityBursts> load_bursts(const PipelineConfig& c,
                                      const Loaded& l, std::string* hash) {
  const fs::path path = c.out_dir / "bursts.jsonl";
  *hash = bursts_hash(l.dataset_hash, c);
  require_hash(path, *hash);
  auto sets = read_bursts_jsonl(path);
  if (sets.size() != l.dataset.entities.size()) {
    throw InputError("bursts.jsonl does not match dataset.jsonl");
  }
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (sets[i].entity_id != l.dataset.entities[i].entity_id) {
      throw InputError("bursts.jsonl does not match dataset.jsonl");
    }
  }
  return sets;
}

Dendrogram load_dendrogram(const PipelineConfig& c, const Loaded& l,
                           std::string* hash) {
  const fs::path path = c.out_dir / "dendrogram.json";
  *hash = cluster_hash(bursts_hash(l.dataset_hash, c), c);
  require_hash(path, *hash);
  Dendrogram d = dendrogram_from_json(read_file(path));
  if (d.leaf_ids.size() != l.dataset.entities.size()) {
    throw InputError("dendrogram.json does not match dataset.jsonl");
  }
  for (std::size_t i = 0; i < d.leaf_ids.size(); ++i) {
    if (d.leaf_ids[i] != l.dataset.entities[i].entity_id) {
      throw InputError("dendrogram.json does not match dataset.jsonl");
    }
  }
  return d;
}

std::vector<EntityFeatures> features_of(const Loaded& l,
                                        const std::vector<EntityBursts>& b) {
  std::vector<EntityFeatures> f(l.series.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    f[i] = entity_features(l.series[i], b[i].bursts);
  }
  return f;
}

std::vector<std::vector<std::size_t>> members_by_label(const FlatClustering& fc) {
  std::vector<std::vector<std::size_t>> groups(static_cast<std::size_t>(fc.k));
  for (std::size_t i = 0; i < fc.labels.size(); ++i) {
    groups[static_cast<std::size_t>(fc.labels[i])].push_back(i);
  }
  return groups;
}

SignatureOptions signature_options(const PipelineConfig& c) {
  SignatureOptions o;
  o.length = c.sig_length;
  o.max_length = c.sig_max_length;
  return o;
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(
      std::max_element(v.begin(), v.end()) - v.begin());
}

ojson signature_entry(const GroupSignature& sig) {
  ojson j;
  j["n_members"] = sig.n_members;
  j["length"] = sig.length;
  const std::size_t am = argmax(sig.mean_curve);
  j["argmax"] = am;
  j["argmax_relative"] =
      sig.length > 1 ? static_cast<double>(am) / static_cast<double>(sig.length - 1)
                     : 0.0;
  return j;
}

// File-name-safe rendering of an entity id.
std::string safe_name(std::string_view id) {
  std::string out;
  for (char ch : id) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                    (ch >= '0' && ch <= '9') || ch == '-' || ch == '_' ||
                    ch == '.';
    out += ok ? ch : '_';
  }
  return out;
}

}  // namespace

std::string bursts_hash(const std::string& build_hash, const PipelineConfig& c) {
  return chain_hash(build_hash, bursts_params(c));
}

std::string cluster_hash(const std::string& bursts_hash,
                         const PipelineConfig& c) {
  return chain_hash(bursts_hash, cluster_params(c));
}

namespace {

// Dense series are far larger than the sparse dataset, so they are rendered
// a chunk of entities at a time and streamed straight to the staged files.
void write_series_files(StagedOutput& out, const Dataset& dataset,
                        const PipelineConfig& c, const std::string& hash) {
  constexpr std::size_t kChunk = 4096;
  std::ofstream csv(out.Stage("series.csv"), std::ios::binary);
  std::ofstream json(out.Stage("series.json"), std::ios::binary);
  csv << "# config_hash=" << hash << '\n' << kSeriesCsvHeader;
  json << "{\"config_hash\": \"" << hash << "\", \"data\": [";
  const std::size_t n = dataset.entities.size();
  std::vector<std::string> csv_rows, json_rows;
  for (std::size_t lo = 0; lo < n; lo += kChunk) {
    const std::size_t m = std::min(kChunk, n - lo);
    csv_rows.assign(m, {});
    json_rows.assign(m, {});
    parallel_for(m, c.workers, [&](std::size_t i) {
      const auto s = build_series(dataset.entities[lo + i], c.count_mode);
      csv_rows[i] = series_csv_row(s);
      json_rows[i] = series_json_object(s);
    });
    for (std::size_t i = 0; i < m; ++i) {
      csv << csv_rows[i];
      if (lo + i > 0) json << ',';
      json << '\n' << json_rows[i];
    }
  }
  json << "\n]}\n";
  if (!csv.flush() || !json.flush()) {
    throw std::runtime_error("cannot write series files");
  }
}

}  // namespace

void run_build(const PipelineConfig& c) {
  if (!c.span) throw UsageError("build requires --span A:B");
  if (!c.span->valid()) throw UsageError("--span must satisfy A <= B");
  if (c.min_docs < 1) throw UsageError("--min-docs must be >= 1");
  require_file(c.mentions, "mentions");
  require_file(c.metadata, "metadata");
  const ParseMode mode = parse_mode(c);

  ojson inputs = ojson::array({input_entry(c.mentions), input_entry(c.metadata)});
  ojson params = build_params(c);
  const std::string hash = chain_hash(
      inputs[0]["sha256"].get<std::string>() + inputs[1]["sha256"].get<std::string>(),
      params);

  std::ifstream meta_in(c.metadata);
  ParseStats meta_stats;
  const auto metas = parse_metadata(meta_in, mode, &meta_stats, c.epoch);
  progress(c, "build", "{} metadata rows", metas.size());

  DatasetBuilder builder(*c.span, c.min_docs);
  std::ifstream in(c.mentions);
  const ParseStats ps = for_each_mention(
      in, mention_format(c), mode,
      [&](MentionRecord&& r) { builder.Add(r); }, c.epoch);
  progress(c, "build", "{} mention records ({} malformed skipped)", ps.records,
           ps.malformed);

  BuildResult br = builder.Finish(metas);
  const std::size_t emerging = br.dataset.entities.size();
  subsample(br.dataset, c.max_entities, c.seed);
  progress(c, "build", "{} emerging entities, {} kept", emerging,
           br.dataset.entities.size());

  StagedOutput out(c.out_dir);
  out.Write("dataset.jsonl", dataset_jsonl(br.dataset, hash));
  out.Write("filter_report.json",
            json_with_hash(filter_report_json(br.report), hash));
  out.Write("filter_report.csv",
            csv_with_hash(filter_report_csv(br.report), hash));
  write_series_files(out, br.dataset, c, hash);
  ojson counts;
  counts["mention_lines"] = ps.lines;
  counts["mention_records"] = ps.records;
  counts["mention_malformed"] = ps.malformed;
  counts["metadata_rows"] = metas.size();
  counts["metadata_malformed"] = meta_stats.malformed;
  counts["emerging_entities"] = emerging;
  counts["kept_entities"] = br.dataset.entities.size();
  write_manifest(out, "build", hash, params, inputs, counts);
  out.Commit();
}

void run_bursts(const PipelineConfig& c) {
  if (c.window < 1) throw UsageError("--window must be >= 1");
  if (!(c.cutoff_sigma >= 0.0)) throw UsageError("--cutoff-sigma must be >= 0");
  const Loaded l = load_dataset(c);
  const std::string hash = bursts_hash(l.dataset_hash, c);
  const BurstParams bp{c.window, c.cutoff_sigma, c.threshold_mode};

  const std::size_t n = l.series.size();
  std::vector<EntityBursts> sets(n);
  parallel_for(n, c.workers, [&](std::size_t i) {
    const auto& s = l.series[i];
    sets[i] = EntityBursts{s.entity_id, s.start_day,
                           detect_bursts(s.as_double(), bp)};
  });

  StagedOutput out(c.out_dir);
  out.Write("bursts.jsonl", bursts_jsonl(sets, bp, hash));
  std::string summary = "entity_id,n_bursts,mean_norm_duration,mean_norm_value\n";
  std::size_t total = 0, with_bursts = 0;
  for (const auto& s : sets) {
    const BurstStats st = burst_stats(s.bursts);
    summary += fmt::format("{},{},{},{}\n", s.entity_id, st.n_bursts,
                           st.mean_norm_duration, st.mean_norm_value);
    total += st.n_bursts;
    with_bursts += st.n_bursts > 0;
  }
  out.Write("burst_summary.csv", csv_with_hash(summary, hash));
  for (const std::string& id : c.plot_entities) {
    const auto it = std::find_if(sets.begin(), sets.end(),
                                 [&](const auto& s) { return s.entity_id == id; });
    if (it == sets.end()) {
      throw InputError(fmt::format("--plot: unknown entity {}", id));
    }
    const std::size_t i = static_cast<std::size_t>(it - sets.begin());
    out.Write(fmt::format("burst_plot_{}.svg", safe_name(id)),
              burst_plot_svg(l.series[i].as_double(), it->bursts,
                             fmt::format("{} ({} days)", id,
                                         l.series[i].duration()),
                             "config_hash=" + hash));
  }
  progress(c, "bursts", "{} bursts over {} entities ({} bursting)", total, n,
           with_bursts);
  ojson inputs = ojson::array({input_entry(c.out_dir / "dataset.jsonl")});
  ojson counts;
  counts["entities"] = n;
  counts["bursts"] = total;
  counts["entities_with_bursts"] = with_bursts;
  write_manifest(out, "bursts", hash, bursts_params(c), inputs, counts);
  out.Commit();
}

void run_cluster(const PipelineConfig& c) {
  const Loaded l = load_dataset(c);
  std::string bhash;
  const auto sets = load_bursts(c, l, &bhash);
  const std::string hash = cluster_hash(bhash, c);
  if (sets.size() < 2) {
    throw InputError("clustering needs at least two emerging entities");
  }
  for (int k : c.cuts) {
    if (k < 1 || static_cast<std::size_t>(k) > sets.size()) {
      throw UsageError(fmt::format("--k {} outside [1, {}]", k, sets.size()));
    }
  }

  std::vector<RelativeBurstProfile> profiles;
  profiles.reserve(sets.size());
  for (const auto& s : sets) {
    profiles.push_back(to_relative_profile(s.bursts, s.entity_id));
  }
  const MatrixOptions mo{c.variant, c.workers};

  StagedOutput out(c.out_dir);
  // The similarity stage dominates the cost. A tile file left by an earlier
  // run with the same configuration is reused as is.
  const fs::path tiles = c.out_dir / "distances.tiles";
  DistanceMatrix dm;
  bool reused = false;
  if (fs::exists(tiles)) {
    try {
      if (embedded_hash(tiles) == hash) {
        dm = read_distance_tiles(tiles.string());
        reused = dm.size() == profiles.size();
        for (std::size_t i = 0; reused && i < dm.size(); ++i) {
          reused = dm.ids()[i] == profiles[i].entity_id;
        }
      }
    } catch (const InputError&) {
      reused = false;
    }
  }
  if (reused) {
    progress(c, "cluster", "reusing distances.tiles");
  } else {
    const fs::path tmp = out.Stage("distances.tiles");
    write_distance_tiles(profiles, mo, tmp.string(), c.mem_budget, hash);
    dm = read_distance_tiles(tmp.string());
    progress(c, "cluster", "distance matrix over {} entities", dm.size());
  }
  if (dm.size() <= 2000) {
    out.Write("distances.csv", csv_with_hash(distance_matrix_csv(dm), hash));
    out.Write("distances_raw.csv",
              csv_with_hash(raw_distance_csv(profiles, mo), hash));
  }

  const Dendrogram d = hac_ward(dm);
  out.Write("dendrogram.json", json_with_hash(dendrogram_json(d), hash));
  out.Write("dendrogram_summary.json",
            json_with_hash(summary_json(truncate(d, c.summary_levels), d), hash));
  ojson sizes;
  for (int k : c.cuts) {
    const FlatClustering fc = cut(d, static_cast<std::size_t>(k));
    out.Write(fmt::format("clusters_k{}.csv", k),
              csv_with_hash(flat_clustering_csv(fc, d.leaf_ids), hash));
    auto arr = ojson::array();
    for (const auto& g : members_by_label(fc)) arr.push_back(g.size());
    sizes[fmt::format("k{}", k)] = std::move(arr);
  }
  ojson inputs = ojson::array({input_entry(c.out_dir / "dataset.jsonl"),
                               input_entry(c.out_dir / "bursts.jsonl")});
  ojson counts;
  counts["entities"] = d.n_leaves();
  counts["cluster_sizes"] = std::move(sizes);
  write_manifest(out, "cluster", hash, cluster_params(c), inputs, counts,
                 reused ? std::vector<fs::path>{tiles} : std::vector<fs::path>{});
  out.Commit();
}

void run_signatures(const PipelineConfig& c) {
  const Loaded l = load_dataset(c);
  std::string chash;
  const Dendrogram d = load_dendrogram(c, l, &chash);
  const std::string hash = chain_hash(chash, signature_params(c));
  const SignatureOptions opts = signature_options(c);

  StagedOutput out(c.out_dir);
  auto summary = ojson::array();
  for (int k : c.cuts) {
    const FlatClustering fc = cut(d, static_cast<std::size_t>(k));
    const auto groups = members_by_label(fc);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      std::vector<std::vector<double>> members;
      for (std::size_t i : groups[g]) members.push_back(l.series[i].as_double());
      const GroupSignature sig = group_signature(members, opts);
      const std::string stem = fmt::format("signature_k{}_c{}", k, g + 1);
      out.Write(stem + ".csv", csv_with_hash(signature_csv(sig), hash));
      out.Write(stem + ".svg",
                signature_svg(sig,
                              fmt::format("k={} cluster {} (n={})", k, g + 1,
                                          sig.n_members),
                              "config_hash=" + hash));
      ojson e = signature_entry(sig);
      e["k"] = k;
      e["cluster"] = g + 1;
      summary.push_back(std::move(e));
    }
  }
  ojson doc;
  doc["signatures"] = std::move(summary);
  out.Write("signatures.json", json_with_hash(doc.dump(), hash));
  ojson inputs = ojson::array({input_entry(c.out_dir / "dataset.jsonl"),
                               input_entry(c.out_dir / "dendrogram.json")});
  write_manifest(out, "signatures", hash, signature_params(c), inputs,
                 ojson{{"entities", d.n_leaves()}});
  out.Commit();
}

void run_stats(const PipelineConfig& c) {
  const Loaded l = load_dataset(c);
  std::string bhash, chash;
  const auto sets = load_bursts(c, l, &bhash);
  const Dendrogram d = load_dendrogram(c, l, &chash);
  const std::string hash = chain_hash(chash, stats_params(c));
  const auto features = features_of(l, sets);

  StagedOutput out(c.out_dir);
  for (int k : c.cuts) {
    const FlatClustering fc = cut(d, static_cast<std::size_t>(k));
    const auto groups = members_by_label(fc);
    std::vector<GroupStats> rows;
    std::vector<std::string> names;
    std::vector<std::vector<EntityFeatures>> grouped;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      std::vector<EntityFeatures> f;
      for (std::size_t i : groups[g]) f.push_back(features[i]);
      names.push_back(fmt::format("cluster_{}", g + 1));
      rows.push_back(descriptive_stats(f, names.back()));
      grouped.push_back(std::move(f));
    }
    out.Write(fmt::format("group_stats_k{}.csv", k),
              csv_with_hash(group_stats_csv(rows), hash));
    out.Write(fmt::format("group_stats_k{}.json", k),
              json_with_hash(group_stats_json(rows), hash));
    if (k > 1) {
      const auto sig = significance_report(names, grouped, c.alpha);
      out.Write(fmt::format("significance_k{}.csv", k),
                csv_with_hash(significance_csv(sig), hash));
      out.Write(fmt::format("significance_k{}.json", k),
                json_with_hash(significance_json(sig), hash));
    }
  }
  ojson inputs = ojson::array({input_entry(c.out_dir / "dataset.jsonl"),
                               input_entry(c.out_dir / "bursts.jsonl"),
                               input_entry(c.out_dir / "dendrogram.json")});
  write_manifest(out, "stats", hash, stats_params(c), inputs,
                 ojson{{"entities", features.size()}});
  out.Commit();
}

void run_streams(const PipelineConfig& c) {
  const Loaded l = load_dataset(c);
  std::string bhash;
  const auto sets = load_bursts(c, l, &bhash);
  const std::string hash = chain_hash(bhash, streams_params(c));
  const auto features = features_of(l, sets);
  const StreamPartition part = partition_by_stream(l.dataset);

  std::optional<LagSummary> lags;
  try {
    lags = cross_stream_lag(l.dataset);
  } catch (const InputError&) {
    progress(c, "streams", "no entity appears in both streams; lags omitted");
  }
  const auto rows = stream_report(l.dataset, part, features);

  StagedOutput out(c.out_dir);
  out.Write("stream_report.csv", csv_with_hash(stream_report_csv(rows), hash));
  out.Write("stream_report.json",
            json_with_hash(stream_report_json(rows, lags), hash));

  std::vector<std::string> names;
  std::vector<std::vector<EntityFeatures>> grouped;
  auto summary = ojson::array();
  for (int g = 0; g < kNumStreamGroups; ++g) {
    const auto& members = part.groups[g];
    if (members.empty()) continue;
    const std::string name(stream_group_name(static_cast<StreamGroup>(g)));
    std::vector<EntityFeatures> f;
    std::vector<std::vector<double>> curves;
    for (std::size_t i : members) {
      f.push_back(features[i]);
      curves.push_back(l.series[i].as_double());
    }
    names.push_back(name);
    grouped.push_back(std::move(f));
    const GroupSignature sig = group_signature(curves, signature_options(c));
    out.Write(fmt::format("signature_stream_{}.csv", name),
              csv_with_hash(signature_csv(sig), hash));
    out.Write(fmt::format("signature_stream_{}.svg", name),
              signature_svg(sig, fmt::format("{} (n={})", name, sig.n_members),
                            "config_hash=" + hash));
    ojson e = signature_entry(sig);
    e["group"] = name;
    summary.push_back(std::move(e));
  }
  if (names.size() >= 2) {
    const auto sig = significance_report(names, grouped, c.alpha);
    out.Write("stream_significance.csv", csv_with_hash(significance_csv(sig), hash));
    out.Write("stream_significance.json",
              json_with_hash(significance_json(sig), hash));
  }
  ojson doc;
  doc["signatures"] = std::move(summary);
  out.Write("stream_signatures.json", json_with_hash(doc.dump(), hash));

  ojson counts;
  for (int g = 0; g < kNumStreamGroups; ++g) {
    counts[std::string(stream_group_name(static_cast<StreamGroup>(g)))] =
        part.groups[g].size();
  }
  ojson inputs = ojson::array({input_entry(c.out_dir / "dataset.jsonl"),
                               input_entry(c.out_dir / "bursts.jsonl")});
  write_manifest(out, "streams", hash, streams_params(c), inputs, counts);
  out.Commit();
}

void run_types(const PipelineConfig& c) {
  const Loaded l = load_dataset(c);
  std::string bhash;
  const auto sets = load_bursts(c, l, &bhash);
  const std::string hash = chain_hash(bhash, types_params(c));
  const auto features = features_of(l, sets);
  const TypeReport report = type_report(l.dataset, features, c.type_min_count);

  StagedOutput out(c.out_dir);
  out.Write("type_report.csv", csv_with_hash(type_report_csv(report), hash));
  out.Write("type_report.json", json_with_hash(type_report_json(report), hash));
  ojson inputs = ojson::array({input_entry(c.out_dir / "dataset.jsonl"),
                               input_entry(c.out_dir / "bursts.jsonl")});
  write_manifest(out, "types", hash, types_params(c), inputs,
                 ojson{{"rows", report.rows.size()}});
  out.Commit();
}

void run_all(const PipelineConfig& c) {
  run_build(c);
  run_bursts(c);
  run_cluster(c);
  run_signatures(c);
  run_stats(c);
  run_streams(c);
  run_types(c);
}

}  // namespace emerge
