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

#include "emerge/artifacts.h"

#include <unistd.h>

#include <cctype>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "emerge/similarity.h"

namespace emerge {

using ojson = nlohmann::ordered_json;

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (ctx_ == nullptr || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("sha256 init failed");
    }
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void Update(const void* data, std::size_t n) {
    EVP_DigestUpdate(ctx_, data, n);
  }
  std::string HexDigest() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_, md, &len);
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", md[i]);
    return out;
  }

 private:
  EVP_MD_CTX* ctx_;
};

bool is_hex(char c) {
  return std::isxdigit(static_cast<unsigned char>(c)) != 0;
}

ojson parse_line(const std::string& line, const fs::path& path,
                 std::size_t lineno) {
  auto j = ojson::parse(line, nullptr, /*allow_exceptions=*/false);
  if (!j.is_object()) {
    throw InputError(fmt::format("{}: malformed JSON at line {}",
                                 path.string(), lineno));
  }
  return j;
}

std::vector<DayCount> day_counts_from(const ojson& arr) {
  std::vector<DayCount> out;
  for (const auto& row : arr) {
    out.push_back(DayCount{row.at(0).get<Day>(), row.at(1).get<std::uint32_t>(),
                           row.at(2).get<std::uint32_t>()});
  }
  return out;
}

ojson day_counts_to(const std::vector<DayCount>& rows) {
  auto arr = ojson::array();
  for (const DayCount& d : rows) arr.push_back({d.day, d.docs, d.occurrences});
  return arr;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  Sha256 h;
  h.Update(bytes.data(), bytes.size());
  return h.HexDigest();
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  Sha256 h;
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    h.Update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  if (in.bad()) throw InputError("error reading " + path.string());
  return h.HexDigest();
}

std::string chain_hash(std::string_view parent, const ojson& params) {
  std::string text(parent);
  text += '\n';
  text += params.dump();
  return sha256_hex(text).substr(0, 16);
}

StagedOutput::StagedOutput(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) {
    throw InputError("cannot create output directory " + dir_.string() +
                     ": " + ec.message());
  }
}

StagedOutput::~StagedOutput() {
  if (committed_) return;
  for (const auto& [name, tmp] : staged_) {
    std::error_code ec;
    fs::remove(tmp, ec);
  }
}

fs::path StagedOutput::Stage(const std::string& name) {
  fs::path tmp =
      dir_ / fmt::format(".{}.{}.tmp", name, static_cast<long>(::getpid()));
  staged_.emplace_back(name, tmp);
  return tmp;
}

void StagedOutput::Write(const std::string& name, std::string_view content) {
  const fs::path tmp = Stage(name);
  std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw InputError("cannot write " + tmp.string());
}

void StagedOutput::Commit() {
  for (const auto& [name, tmp] : staged_) {
    std::error_code ec;
    fs::rename(tmp, dir_ / name, ec);
    if (ec) {
      throw std::runtime_error("cannot move " + tmp.string() + " into place: " +
                               ec.message());
    }
  }
  committed_ = true;
}

std::vector<std::string> StagedOutput::names() const {
  std::vector<std::string> out;
  for (const auto& [name, tmp] : staged_) out.push_back(name);
  return out;
}

std::string json_with_hash(std::string_view json, const std::string& hash) {
  ojson body = ojson::parse(json);
  ojson out;
  out["config_hash"] = hash;
  if (body.is_object()) {
    for (auto it = body.begin(); it != body.end(); ++it) {
      out[it.key()] = std::move(it.value());
    }
  } else {
    out["data"] = std::move(body);
  }
  return out.dump(2) + "\n";
}

std::string csv_with_hash(std::string_view csv, const std::string& hash) {
  std::string out = fmt::format("# config_hash={}\n", hash);
  out += csv;
  return out;
}

std::string embedded_hash(const fs::path& path) {
  if (path.extension() == ".tiles") {
    return read_tile_header(path.string()).config_hash;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("missing artifact " + path.string());
  // The hash is always written near the top of text artifacts.
  std::string head(4096, '\0');
  in.read(head.data(), static_cast<std::streamsize>(head.size()));
  head.resize(static_cast<std::size_t>(in.gcount()));
  const std::size_t key = head.find("config_hash");
  if (key != std::string::npos) {
    std::size_t p = key + std::string_view("config_hash").size();
    while (p < head.size() &&
           (head[p] == '"' || head[p] == '=' || head[p] == ':' ||
            head[p] == ' ')) {
      ++p;
    }
    std::size_t q = p;
    while (q < head.size() && is_hex(head[q])) ++q;
    if (q > p) return head.substr(p, q - p);
  }
  throw InputError(path.string() + " carries no config hash");
}

void require_hash(const fs::path& path, const std::string& expected) {
  const std::string found = embedded_hash(path);
  if (found != expected) {
    throw InputError(fmt::format(
        "{} was produced with a different configuration (config hash {}, "
        "expected {}); rerun the upstream stage",
        path.string(), found, expected));
  }
}

std::string dataset_jsonl(const Dataset& dataset, const std::string& hash) {
  ojson header;
  header["config_hash"] = hash;
  header["kind"] = "dataset";
  header["span"] = {dataset.span.start, dataset.span.end};
  header["min_docs"] = dataset.min_docs;
  header["entities"] = dataset.entities.size();
  std::string out = header.dump() + "\n";
  for (const EmergingEntity& e : dataset.entities) {
    ojson j;
    j["entity_id"] = e.entity_id;
    j["creation_day"] = e.creation_day;
    j["types"] = e.type_labels;
    j["pageviews"] = e.pageviews ? ojson(*e.pageviews) : ojson(nullptr);
    j["news"] = day_counts_to(e.news);
    j["social"] = day_counts_to(e.social);
    out += j.dump();
    out += '\n';
  }
  return out;
}

Dataset read_dataset_jsonl(const fs::path& path, std::string* hash) {
  std::ifstream in(path);
  if (!in) throw InputError("missing artifact " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw InputError(path.string() + " is empty");
  const ojson header = parse_line(line, path, 1);
  if (header.value("kind", "") != "dataset") {
    throw InputError(path.string() + " is not a dataset file");
  }
  Dataset d;
  try {
    d.span = DaySpan{header.at("span").at(0).get<Day>(),
                     header.at("span").at(1).get<Day>()};
    d.min_docs = header.at("min_docs").get<int>();
    if (hash) *hash = header.at("config_hash").get<std::string>();
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const ojson j = parse_line(line, path, lineno);
      EmergingEntity e;
      e.entity_id = j.at("entity_id").get<std::string>();
      e.creation_day = j.at("creation_day").get<Day>();
      e.type_labels = j.at("types").get<std::vector<std::string>>();
      if (!j.at("pageviews").is_null()) {
        e.pageviews = j.at("pageviews").get<std::uint64_t>();
      }
      e.news = day_counts_from(j.at("news"));
      e.social = day_counts_from(j.at("social"));
      d.entities.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw InputError(path.string() + ": " + ex.what());
  }
  if (d.entities.size() != header.at("entities").get<std::size_t>()) {
    throw InputError(path.string() + " is truncated");
  }
  return d;
}

std::string bursts_jsonl(const std::vector<EntityBursts>& sets,
                         const BurstParams& params, const std::string& hash) {
  ojson header;
  header["config_hash"] = hash;
  header["kind"] = "bursts";
  header["window"] = params.window;
  header["cutoff_sigma"] = params.cutoff_sigma;
  header["threshold_mode"] = params.mode == ThresholdMode::kMeanCentered
                                 ? "mean_centered"
                                 : "bare_sigma";
  header["entities"] = sets.size();
  std::string out = header.dump() + "\n";
  for (const EntityBursts& s : sets) {
    out += burst_set_json(s.bursts, s.entity_id, s.start_day);
    out += '\n';
  }
  return out;
}

std::vector<EntityBursts> read_bursts_jsonl(const fs::path& path,
                                            std::string* hash) {
  std::ifstream in(path);
  if (!in) throw InputError("missing artifact " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw InputError(path.string() + " is empty");
  const ojson header = parse_line(line, path, 1);
  if (header.value("kind", "") != "bursts") {
    throw InputError(path.string() + " is not a bursts file");
  }
  std::vector<EntityBursts> out;
  try {
    if (hash) *hash = header.at("config_hash").get<std::string>();
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const ojson j = parse_line(line, path, lineno);
      EntityBursts eb;
      eb.entity_id = j.at("entity_id").get<std::string>();
      eb.start_day = j.at("start_day").get<Day>();
      BurstSet& bs = eb.bursts;
      bs.source_length = j.at("source_length").get<std::size_t>();
      bs.window = j.at("window").get<int>();
      bs.cutoff_sigma = j.at("cutoff_sigma").get<double>();
      bs.threshold = j.at("threshold").get<double>();
      bs.series_total = j.at("series_total").get<double>();
      for (const auto& b : j.at("bursts")) {
        bs.bursts.push_back(Burst{b.at("start_idx").get<std::size_t>(),
                                  b.at("end_idx").get<std::size_t>(),
                                  b.at("peak").get<double>()});
      }
      out.push_back(std::move(eb));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw InputError(path.string() + ": " + ex.what());
  }
  if (out.size() != header.at("entities").get<std::size_t>()) {
    throw InputError(path.string() + " is truncated");
  }
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("missing file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace emerge
