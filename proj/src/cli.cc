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

#include <cstdio>
#include <fstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "emerge/artifacts.h"
#include "emerge/pipeline.h"
#include "emerge/synth.h"

namespace emerge {

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kInput = 2, kInternal = 3 };

int report_error(ExitCode code, std::string_view message) {
  static constexpr std::string_view kKinds[] = {"ok", "usage", "input",
                                                "internal"};
  nlohmann::ordered_json j;
  j["error"] = kKinds[code];
  j["exit_code"] = static_cast<int>(code);
  j["message"] = message;
  fmt::print(stderr, "{}\n", j.dump());
  return code;
}

struct SynthOptions {
  std::size_t n_early = 500;
  std::size_t n_late = 500;
  std::size_t violations = 0;
  bool curiosity = false;
  double rate_scale = 1.0;
  double duplicate_rate = 0.1;
  int min_duration = 60;
  int max_duration = 400;
};

void run_synth(const PipelineConfig& c, const SynthOptions& o) {
  SynthConfig sc;
  if (c.span) sc.span = *c.span;
  sc.min_docs = c.min_docs;
  sc.n_early = o.n_early;
  sc.n_late = o.n_late;
  sc.n_no_meta = sc.n_post_creation = sc.n_after_span = sc.n_too_few =
      sc.n_unmentioned = o.violations;
  sc.curiosity = o.curiosity;
  sc.rate_scale = o.rate_scale;
  sc.duplicate_rate = o.duplicate_rate;
  sc.min_duration = o.min_duration;
  sc.max_duration = o.max_duration;
  sc.seed = c.seed;

  nlohmann::ordered_json params;
  params["stage"] = "synth";
  params["span"] = {sc.span.start, sc.span.end};
  params["min_docs"] = sc.min_docs;
  params["n_early"] = sc.n_early;
  params["n_late"] = sc.n_late;
  params["violations"] = o.violations;
  params["curiosity"] = sc.curiosity;
  params["rate_scale"] = sc.rate_scale;
  params["duplicate_rate"] = sc.duplicate_rate;
  params["duration"] = {sc.min_duration, sc.max_duration};
  params["seed"] = sc.seed;
  const std::string hash = chain_hash("", params);

  StagedOutput out(c.out_dir);
  const fs::path tmp = out.Stage("mentions.tsv");
  std::ofstream mentions(tmp, std::ios::binary | std::ios::trunc);
  std::string buffer;
  SynthManifest manifest;
  const auto metas = generate_corpus(
      sc,
      [&](const MentionRecord& r) {
        buffer += mention_tsv_line(r);
        if (buffer.size() > (1u << 20)) {
          mentions.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
          buffer.clear();
        }
      },
      &manifest);
  mentions.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  mentions.close();
  if (!mentions) throw InputError("cannot write " + tmp.string());
  out.Write("meta.tsv", metadata_tsv(metas));
  out.Write("truth.json", json_with_hash(manifest_json(manifest), hash));
  out.Commit();
  if (!c.quiet) {
    fmt::print(stderr, "[synth] {} mention records, {} metadata rows\n",
               manifest.records, metas.size());
  }
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Emerging-entity analytics over mention streams"};
  app.require_subcommand(1);
  app.fallthrough();

  PipelineConfig c;
  c.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string span_text, epoch_text, format_text, threshold_text = "mean";
  std::string count_text = "documents", bsim_text = "jaccard";
  std::string sig_length_text = "auto";
  std::string mentions_text, meta_text, out_text = "out";

  app.add_option("--mentions", mentions_text, "Mention file (TSV or JSON lines)")
      ->envname("EMERGE_MENTIONS");
  app.add_option("--meta", meta_text, "Entity metadata TSV")
      ->envname("EMERGE_META");
  app.add_option("--out", out_text, "Output directory")
      ->envname("EMERGE_OUT")
      ->capture_default_str();
  app.add_option("--format", format_text, "Mention format: tsv or jsonl")
      ->envname("EMERGE_FORMAT")
      ->check(CLI::IsMember({"tsv", "jsonl"}));
  app.add_option("--span", span_text, "Corpus span A:B (inclusive days)")
      ->envname("EMERGE_SPAN");
  app.add_option("--epoch", epoch_text,
                 "Day 0 for ISO-dated input (YYYY-MM-DD or day index)")
      ->envname("EMERGE_EPOCH");
  app.add_option("--min-docs", c.min_docs, "Minimum pre-creation documents")
      ->envname("EMERGE_MIN_DOCS")
      ->capture_default_str();
  app.add_option("--window", c.window, "Moving-average window (days)")
      ->envname("EMERGE_WINDOW")
      ->capture_default_str();
  app.add_option("--cutoff-sigma", c.cutoff_sigma,
                 "Burst cutoff in standard deviations")
      ->envname("EMERGE_CUTOFF_SIGMA")
      ->capture_default_str();
  app.add_option("--threshold", threshold_text,
                 "Cutoff form: mean (mean + k*sd) or sigma (k*sd)")
      ->envname("EMERGE_THRESHOLD")
      ->check(CLI::IsMember({"mean", "sigma"}))
      ->capture_default_str();
  app.add_option("--count", count_text, "Daily value: documents or occurrences")
      ->envname("EMERGE_COUNT")
      ->check(CLI::IsMember({"documents", "occurrences"}))
      ->capture_default_str();
  app.add_option("--bsim", bsim_text, "Burst similarity: jaccard or peak")
      ->envname("EMERGE_BSIM")
      ->check(CLI::IsMember({"jaccard", "peak"}))
      ->capture_default_str();
  app.add_option("--k", c.cuts, "Flat cut levels, comma separated")
      ->envname("EMERGE_K")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--sig-length", sig_length_text,
                 "Signature length: auto or a positive integer")
      ->envname("EMERGE_SIG_LENGTH")
      ->capture_default_str();
  app.add_option("--sig-max-length", c.sig_max_length,
                 "Clamp for automatic signature length (0: none)")
      ->envname("EMERGE_SIG_MAX_LENGTH");
  app.add_option("--mem-budget", c.mem_budget,
                 "Resident distance tile budget, e.g. 512M or 4G")
      ->envname("EMERGE_MEM_BUDGET")
      ->transform(CLI::AsSizeValue(false));
  app.add_option("--workers", c.workers, "Worker threads")
      ->envname("EMERGE_WORKERS")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", c.seed, "Seed for subsampling and synthesis")
      ->envname("EMERGE_SEED")
      ->capture_default_str();
  app.add_flag("--strict", c.strict, "Fail on the first malformed line")
      ->envname("EMERGE_STRICT");
  app.add_option("--max-entities", c.max_entities,
                 "Keep a seeded subsample of at most N entities (0: all)")
      ->envname("EMERGE_MAX_ENTITIES");
  app.add_option("--type-min-count", c.type_min_count,
                 "Minimum entities for a type row")
      ->envname("EMERGE_TYPE_MIN_COUNT")
      ->capture_default_str();
  app.add_option("--summary-levels", c.summary_levels,
                 "Depth of the truncated dendrogram")
      ->envname("EMERGE_SUMMARY_LEVELS")
      ->capture_default_str();
  app.add_option("--alpha", c.alpha, "Significance level")
      ->envname("EMERGE_ALPHA")
      ->capture_default_str();
  app.add_option("--plot", c.plot_entities,
                 "Entity to draw a burst plot for (repeatable)");
  app.add_flag("--quiet", c.quiet, "No progress output")
      ->envname("EMERGE_QUIET");

  SynthOptions so;
  auto* synth = app.add_subcommand("synth", "Write a synthetic corpus");
  synth->add_option("--n-early", so.n_early, "Early-burst entities")
      ->capture_default_str();
  synth->add_option("--n-late", so.n_late, "Late-burst entities")
      ->capture_default_str();
  synth->add_option("--violations", so.violations,
                    "Entities planted per filter violation")
      ->capture_default_str();
  synth->add_flag("--curiosity", so.curiosity,
                  "Add a two-burst entity 'Curiosity_(rover)'");
  synth->add_option("--rate-scale", so.rate_scale, "Multiplier on daily rates")
      ->capture_default_str();
  synth->add_option("--duplicate-rate", so.duplicate_rate,
                    "Chance a document repeats its mention")
      ->capture_default_str();
  synth->add_option("--min-duration", so.min_duration,
                    "Shortest emergence duration (days)")
      ->capture_default_str();
  synth->add_option("--max-duration", so.max_duration,
                    "Longest emergence duration (days)")
      ->capture_default_str();

  const std::pair<const char*, const char*> stages[] = {
      {"build", "Ingest, filter and build emergence series"},
      {"bursts", "Detect bursts"},
      {"cluster", "Distance matrix, Ward dendrogram and flat cuts"},
      {"signatures", "Per-cluster signatures"},
      {"stats", "Per-cluster statistics and significance tests"},
      {"streams", "Five-way stream report"},
      {"types", "Per-type report"},
      {"all", "Every stage from build to types"},
  };
  for (const auto& [name, help] : stages) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(kUsage, e.what());
  }

  try {
    c.mentions = mentions_text;
    c.metadata = meta_text;
    c.out_dir = out_text;
    if (!span_text.empty()) {
      try {
        c.span = parse_span(span_text);
      } catch (const InputError& e) {
        throw UsageError(fmt::format("--span: {}", e.what()));
      }
    }
    if (!epoch_text.empty()) {
      auto d = parse_day(epoch_text, 0);
      if (!d) throw UsageError("--epoch: expected YYYY-MM-DD or a day index");
      c.epoch = *d;
    }
    if (!format_text.empty()) {
      c.format = format_text == "tsv" ? MentionFormat::kTsv
                                      : MentionFormat::kJsonLines;
    }
    c.threshold_mode = threshold_text == "mean" ? ThresholdMode::kMeanCentered
                                                : ThresholdMode::kBareSigma;
    c.count_mode = count_text == "documents" ? CountMode::kDocuments
                                             : CountMode::kOccurrences;
    c.variant = bsim_text == "jaccard" ? BsimVariant::kJaccard
                                       : BsimVariant::kPeakWeighted;
    if (sig_length_text != "auto") {
      std::size_t pos = 0;
      long long v = 0;
      try {
        v = std::stoll(sig_length_text, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != sig_length_text.size() || v < 2) {
        throw UsageError("--sig-length must be 'auto' or an integer >= 2");
      }
      c.sig_length = static_cast<std::size_t>(v);
    }
    if (c.cuts.empty()) throw UsageError("--k needs at least one level");

    const std::string sub = app.get_subcommands().front()->get_name();
    if (sub == "synth") run_synth(c, so);
    else if (sub == "build") run_build(c);
    else if (sub == "bursts") run_bursts(c);
    else if (sub == "cluster") run_cluster(c);
    else if (sub == "signatures") run_signatures(c);
    else if (sub == "stats") run_stats(c);
    else if (sub == "streams") run_streams(c);
    else if (sub == "types") run_types(c);
    else run_all(c);
  } catch (const UsageError& e) {
    return report_error(kUsage, e.what());
  } catch (const InputError& e) {
    return report_error(kInput, e.what());
  } catch (const std::exception& e) {
    return report_error(kInternal, e.what());
  }
  return kOk;
}

}  // namespace emerge
