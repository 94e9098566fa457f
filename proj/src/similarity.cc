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

#include "emerge/similarity.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

namespace emerge {

RelativeBurstProfile to_relative_profile(const BurstSet& bs,
                                         std::string entity_id) {
  RelativeBurstProfile p;
  p.entity_id = std::move(entity_id);
  if (bs.source_length == 0) return p;
  const double len = static_cast<double>(bs.source_length);
  double max_peak = 0.0;
  for (const Burst& b : bs.bursts) max_peak = std::max(max_peak, b.peak);
  for (const Burst& b : bs.bursts) {
    Interval iv;
    iv.start = static_cast<double>(b.start) / len;
    iv.end = static_cast<double>(b.end + 1) / len;
    iv.weight = max_peak > 0.0 ? b.peak / max_peak : 1.0;
    p.intervals.push_back(iv);
  }
  return p;
}

namespace {

double total_length(const std::vector<Interval>& xs) {
  double s = 0.0;
  for (const auto& iv : xs) s += iv.length();
  return s;
}

double jaccard(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  // Overlap pieces are visited in positional order whichever argument comes
  // first, so the sum (and the result) is exactly symmetric.
  double inter = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    double lo = std::max(a[i].start, b[j].start);
    double hi = std::min(a[i].end, b[j].end);
    if (hi > lo) inter += hi - lo;
    if (a[i].end < b[j].end) {
      ++i;
    } else {
      ++j;
    }
  }
  const double uni = total_length(a) + total_length(b) - inter;
  if (uni <= 0.0) return 1.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double weight_at(const std::vector<Interval>& xs, std::size_t& cursor,
                 double mid) {
  while (cursor < xs.size() && xs[cursor].end <= mid) ++cursor;
  if (cursor < xs.size() && xs[cursor].start <= mid) return xs[cursor].weight;
  return 0.0;
}

// Weighted Jaccard: sum of len*min(wa, wb) over sum of len*max(wa, wb).
double weighted_jaccard(const std::vector<Interval>& a,
                        const std::vector<Interval>& b) {
  std::vector<double> cuts;
  cuts.reserve(2 * (a.size() + b.size()));
  for (const auto& iv : a) cuts.insert(cuts.end(), {iv.start, iv.end});
  for (const auto& iv : b) cuts.insert(cuts.end(), {iv.start, iv.end});
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double num = 0.0, den = 0.0;
  std::size_t ca = 0, cb = 0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double len = cuts[k + 1] - cuts[k];
    const double mid = cuts[k] + 0.5 * len;
    const double wa = weight_at(a, ca, mid);
    const double wb = weight_at(b, cb, mid);
    num += len * std::min(wa, wb);
    den += len * std::max(wa, wb);
  }
  if (den <= 0.0) return 1.0;
  return std::clamp(num / den, 0.0, 1.0);
}

}  // namespace

double bsim(const RelativeBurstProfile& a, const RelativeBurstProfile& b,
            BsimVariant variant) {
  const bool ea = a.intervals.empty();
  const bool eb = b.intervals.empty();
  if (ea && eb) return 1.0;
  if (ea || eb) return 0.0;
  return variant == BsimVariant::kJaccard
             ? jaccard(a.intervals, b.intervals)
             : weighted_jaccard(a.intervals, b.intervals);
}

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<std::string> ids)
    : n_(n), data_(n < 2 ? 0 : n * (n - 1) / 2, 0.0), ids_(std::move(ids)) {
  if (ids_.empty()) {
    ids_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) ids_.push_back(std::to_string(i));
  }
  if (ids_.size() != n) {
    throw InputError("distance matrix id map does not match its size");
  }
}

DistanceMatrix DistanceMatrix::from_square(
    const std::vector<std::vector<double>>& m, std::vector<std::string> ids) {
  const std::size_t n = m.size();
  DistanceMatrix dm(n, std::move(ids));
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw InputError("distance matrix is not square");
    if (m[i][i] != 0.0) {
      throw InputError(fmt::format("nonzero self-distance at {}", i));
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (m[i][j] != m[j][i]) {
        throw InputError(
            fmt::format("distance matrix is asymmetric at ({}, {})", i, j));
      }
      if (!std::isfinite(m[i][j]) || m[i][j] < 0.0) {
        throw InputError(
            fmt::format("distance out of range at ({}, {})", i, j));
      }
      dm.set(i, j, m[i][j]);
    }
  }
  return dm;
}

std::size_t DistanceMatrix::condensed_index(std::size_t n, std::size_t i,
                                            std::size_t j) {
  if (i > j) std::swap(i, j);
  return n * i - i * (i + 1) / 2 + (j - i - 1);
}

double DistanceMatrix::operator()(std::size_t i, std::size_t j) const {
  if (i == j) return 0.0;
  return data_[condensed_index(n_, i, j)];
}

void DistanceMatrix::set(std::size_t i, std::size_t j, double v) {
  if (i == j) return;
  data_[condensed_index(n_, i, j)] = v;
}

std::vector<double> similarity_row_norms(
    const std::vector<RelativeBurstProfile>& profiles,
    const MatrixOptions& options) {
  const std::size_t n = profiles.size();
  std::vector<double> norms(n);
  parallel_for(n, options.workers, [&](std::size_t i) {
    double ss = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double s = bsim(profiles[i], profiles[j], options.variant);
      ss += s * s;
    }
    norms[i] = std::sqrt(ss);
  });
  return norms;
}

double adjusted_distance(double similarity, double norm_i, double norm_j) {
  const double scale = 0.5 * (1.0 / norm_i + 1.0 / norm_j);
  return std::clamp(scale * (1.0 - similarity), 0.0, 1.0);
}

DistanceMatrix build_distance_matrix(
    const std::vector<RelativeBurstProfile>& profiles,
    const MatrixOptions& options) {
  const std::size_t n = profiles.size();
  if (n < 2) throw InputError("distance matrix needs at least two entities");
  std::vector<std::string> ids;
  ids.reserve(n);
  for (const auto& p : profiles) ids.push_back(p.entity_id);
  DistanceMatrix dm(n, std::move(ids));
  const auto norms = similarity_row_norms(profiles, options);
  auto cells = dm.condensed();
  parallel_for(n - 1, options.workers, [&](std::size_t i) {
    std::size_t base = DistanceMatrix::condensed_index(n, i, i + 1);
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = bsim(profiles[i], profiles[j], options.variant);
      cells[base + (j - i - 1)] = adjusted_distance(s, norms[i], norms[j]);
    }
  });
  return dm;
}

std::string raw_distance_csv(const std::vector<RelativeBurstProfile>& profiles,
                             const MatrixOptions& options) {
  const auto norms = similarity_row_norms(profiles, options);
  std::string out = "entity_id";
  for (const auto& p : profiles) out += "," + p.entity_id;
  out += '\n';
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    out += profiles[i].entity_id;
    for (std::size_t j = 0; j < profiles.size(); ++j) {
      double s = bsim(profiles[i], profiles[j], options.variant);
      double sym = 0.5 * (s / norms[i] + s / norms[j]);
      out += fmt::format(",{}", 1.0 - sym);
    }
    out += '\n';
  }
  return out;
}

std::string distance_matrix_csv(const DistanceMatrix& dm) {
  std::string out = "entity_id";
  for (const auto& id : dm.ids()) out += "," + id;
  out += '\n';
  for (std::size_t i = 0; i < dm.size(); ++i) {
    out += dm.ids()[i];
    for (std::size_t j = 0; j < dm.size(); ++j) {
      out += fmt::format(",{}", dm(i, j));
    }
    out += '\n';
  }
  return out;
}

namespace {

constexpr char kTileMagic[8] = {'E', 'M', 'D', 'M', 'T', 'I', 'L', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int k = 0; k < 8; ++k) b[k] = static_cast<char>((v >> (8 * k)) & 0xff);
  out.write(b, 8);
}

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int k = 0; k < 4; ++k) b[k] = static_cast<char>((v >> (8 * k)) & 0xff);
  out.write(b, 4);
}

void put_str(std::ostream& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) {
    throw InputError("truncated distance tile file");
  }
  std::uint64_t v = 0;
  for (int k = 7; k >= 0; --k) v = (v << 8) | b[k];
  return v;
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw InputError("truncated distance tile file");
  }
  std::uint32_t v = 0;
  for (int k = 3; k >= 0; --k) v = (v << 8) | b[k];
  return v;
}

std::string get_str(std::istream& in) {
  std::uint32_t len = get_u32(in);
  if (len > (1u << 20)) throw InputError("corrupt distance tile file");
  std::string s(len, '\0');
  if (!in.read(s.data(), len)) throw InputError("truncated distance tile file");
  return s;
}

// Writes tiles with cell(i, j) computing the distance for i < j.
template <typename CellFn>
void write_tiles(std::ostream& out, const std::vector<std::string>& ids,
                 std::uint64_t tile, const std::string& config_hash,
                 int workers, CellFn cell) {
  const std::uint64_t n = ids.size();
  out.write(kTileMagic, sizeof(kTileMagic));
  put_u64(out, n);
  put_u64(out, tile);
  put_str(out, config_hash);
  for (const auto& id : ids) put_str(out, id);

  const std::uint64_t grid = (n + tile - 1) / tile;
  std::vector<double> block;
  std::vector<char> bytes;
  for (std::uint64_t ti = 0; ti < grid; ++ti) {
    for (std::uint64_t tj = ti; tj < grid; ++tj) {
      const std::uint64_t r0 = ti * tile, r1 = std::min(n, r0 + tile);
      const std::uint64_t c0 = tj * tile, c1 = std::min(n, c0 + tile);
      const std::uint64_t cols = c1 - c0;
      block.assign((r1 - r0) * cols, 0.0);
      parallel_for(r1 - r0, workers, [&](std::size_t r) {
        const std::uint64_t i = r0 + r;
        for (std::uint64_t j = c0; j < c1; ++j) {
          if (j > i) block[r * cols + (j - c0)] = cell(i, j);
        }
      });
      if (ti == tj) {
        for (std::uint64_t i = r0; i < r1; ++i) {
          for (std::uint64_t j = r0; j < i; ++j) {
            block[(i - r0) * cols + (j - c0)] =
                block[(j - r0) * cols + (i - c0)];
          }
        }
      }
      bytes.resize(block.size() * 8);
      for (std::size_t k = 0; k < block.size(); ++k) {
        std::uint64_t bits = std::bit_cast<std::uint64_t>(block[k]);
        for (int b = 0; b < 8; ++b) {
          bytes[k * 8 + b] = static_cast<char>((bits >> (8 * b)) & 0xff);
        }
      }
      out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
  }
  if (!out) throw std::runtime_error("failed writing distance tiles");
}

}  // namespace

std::uint64_t tile_size_for_budget(std::uint64_t n, std::uint64_t mem_budget) {
  auto t = static_cast<std::uint64_t>(
      std::floor(std::sqrt(static_cast<double>(mem_budget) / 8.0)));
  while (t > 1 && 8 * t * t > mem_budget) --t;
  return std::clamp<std::uint64_t>(t, 1, std::max<std::uint64_t>(n, 1));
}

void write_distance_tiles(const std::vector<RelativeBurstProfile>& profiles,
                          const MatrixOptions& options, const std::string& path,
                          std::uint64_t mem_budget,
                          const std::string& config_hash) {
  const std::size_t n = profiles.size();
  if (n < 2) throw InputError("distance matrix needs at least two entities");
  std::vector<std::string> ids;
  for (const auto& p : profiles) ids.push_back(p.entity_id);
  const auto norms = similarity_row_norms(profiles, options);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path);
  write_tiles(out, ids, tile_size_for_budget(n, mem_budget), config_hash,
              options.workers, [&](std::size_t i, std::size_t j) {
                double s = bsim(profiles[i], profiles[j], options.variant);
                return adjusted_distance(s, norms[i], norms[j]);
              });
}

void write_distance_tiles(const DistanceMatrix& dm, const std::string& path,
                          std::uint64_t mem_budget,
                          const std::string& config_hash) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path);
  write_tiles(out, dm.ids(), tile_size_for_budget(dm.size(), mem_budget),
              config_hash, 1,
              [&](std::size_t i, std::size_t j) { return dm(i, j); });
}

namespace {

TileFileInfo read_header(std::istream& in, const std::string& path) {
  char magic[8];
  if (!in.read(magic, 8) || !std::equal(magic, magic + 8, kTileMagic)) {
    throw InputError(path + " is not a distance tile file");
  }
  TileFileInfo meta;
  meta.n = get_u64(in);
  meta.tile = get_u64(in);
  meta.config_hash = get_str(in);
  if (meta.tile == 0 || meta.n > (1ull << 32)) {
    throw InputError("corrupt distance tile header in " + path);
  }
  return meta;
}

}  // namespace

TileFileInfo read_tile_header(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open distance tiles " + path);
  return read_header(in, path);
}

DistanceMatrix read_distance_tiles(const std::string& path,
                                   TileFileInfo* info) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open distance tiles " + path);
  const TileFileInfo meta = read_header(in, path);
  std::vector<std::string> ids;
  ids.reserve(meta.n);
  for (std::uint64_t i = 0; i < meta.n; ++i) ids.push_back(get_str(in));
  DistanceMatrix dm(meta.n, std::move(ids));
  const std::uint64_t n = meta.n, tile = meta.tile;
  const std::uint64_t grid = (n + tile - 1) / tile;
  std::vector<unsigned char> bytes;
  for (std::uint64_t ti = 0; ti < grid; ++ti) {
    for (std::uint64_t tj = ti; tj < grid; ++tj) {
      const std::uint64_t r0 = ti * tile, r1 = std::min(n, r0 + tile);
      const std::uint64_t c0 = tj * tile, c1 = std::min(n, c0 + tile);
      const std::uint64_t cols = c1 - c0;
      bytes.resize((r1 - r0) * cols * 8);
      if (!in.read(reinterpret_cast<char*>(bytes.data()),
                   static_cast<std::streamsize>(bytes.size()))) {
        throw InputError("truncated distance tile file " + path);
      }
      for (std::uint64_t i = r0; i < r1; ++i) {
        for (std::uint64_t j = std::max(c0, i + 1); j < c1; ++j) {
          const unsigned char* p = &bytes[((i - r0) * cols + (j - c0)) * 8];
          std::uint64_t bits = 0;
          for (int b = 7; b >= 0; --b) bits = (bits << 8) | p[b];
          dm.set(i, j, std::bit_cast<double>(bits));
        }
      }
    }
  }
  if (info) *info = meta;
  return dm;
}

}  // namespace emerge
