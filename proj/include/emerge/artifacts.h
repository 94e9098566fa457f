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

// On-disk artifacts shared by the pipeline stages.
//
// Every artifact carries the hash of the configuration that produced it:
// a top-level "config_hash" field in JSON, a leading "# config_hash=" line in
// CSV, an XML comment in SVG and a header field in binary tile files. Stage
// hashes are chained, so a downstream stage can tell whether its inputs came
// from the configuration it is running with.

#ifndef EMERGE_ARTIFACTS_H_
#define EMERGE_ARTIFACTS_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "emerge/bursts.h"
#include "emerge/ingest.h"

namespace emerge {

namespace fs = std::filesystem;

std::string sha256_hex(std::string_view bytes);
// Streams the file. Throws InputError when it cannot be read.
std::string sha256_file(const fs::path& path);

// 16 hex digits of sha256(parent || '\n' || params.dump()).
std::string chain_hash(std::string_view parent,
                       const nlohmann::ordered_json& params);

// Writes files under temporary names in the destination directory and
// renames them into place on Commit(). Anything not committed is removed
// when the object is destroyed, so a failed stage leaves no partial output.
class StagedOutput {
 public:
  explicit StagedOutput(fs::path dir);
  ~StagedOutput();
  StagedOutput(const StagedOutput&) = delete;
  StagedOutput& operator=(const StagedOutput&) = delete;

  // Temporary path for a writer that needs a file name.
  fs::path Stage(const std::string& name);
  void Write(const std::string& name, std::string_view content);
  void Commit();

  const fs::path& dir() const { return dir_; }
  // Final names in staging order.
  std::vector<std::string> names() const;
  // (final name, temporary path) pairs in staging order.
  const std::vector<std::pair<std::string, fs::path>>& entries() const {
    return staged_;
  }

 private:
  fs::path dir_;
  std::vector<std::pair<std::string, fs::path>> staged_;
  bool committed_ = false;
};

std::string json_with_hash(std::string_view json, const std::string& hash);
std::string csv_with_hash(std::string_view csv, const std::string& hash);

// Reads the embedded hash from a .json, .jsonl, .csv, .svg or .tiles file.
// Throws InputError when the file is missing or carries no hash.
std::string embedded_hash(const fs::path& path);

// Throws InputError naming the file unless its hash equals `expected`.
void require_hash(const fs::path& path, const std::string& expected);

// Dataset as JSON lines: a header object, then one entity per line.
std::string dataset_jsonl(const Dataset& dataset, const std::string& hash);
Dataset read_dataset_jsonl(const fs::path& path, std::string* hash = nullptr);

struct EntityBursts {
  std::string entity_id;
  Day start_day = 0;
  BurstSet bursts;
};

std::string bursts_jsonl(const std::vector<EntityBursts>& sets,
                         const BurstParams& params, const std::string& hash);
std::vector<EntityBursts> read_bursts_jsonl(const fs::path& path,
                                            std::string* hash = nullptr);

std::string read_file(const fs::path& path);

}  // namespace emerge

#endif  // EMERGE_ARTIFACTS_H_
