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

// Burst similarity and the distance matrix used for clustering.
//
// Series have different lengths and start dates, so bursts are compared in
// relative time: a burst [s, e] of a length-L series covers [s/L, (e+1)/L).
// Similarity is the Jaccard overlap of the covered regions.
//
// Matrix assembly: SM[i][j] = bsim(i, j), each row divided by its L2 norm
// r_i, symmetrized to S = (SM/r_i + SM/r_j) / 2 and turned into distances
// 1 - S. Self-distances 1 - 1/r_i are nonzero, so every entry is recentred
// by the mean self-distance of its pair:
//
//   D[i][j] = (1 - S[i][j]) - ((1 - 1/r_i) + (1 - 1/r_j)) / 2
//           = (1/r_i + 1/r_j) / 2 * (1 - SM[i][j])
//
// Since r_i >= SM[i][i] = 1, D lies in [0, 1], is zero for identical
// profiles and has a zero diagonal.

#ifndef EMERGE_SIMILARITY_H_
#define EMERGE_SIMILARITY_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "emerge/bursts.h"

namespace emerge {

struct Interval {
  double start = 0.0;  // inclusive
  double end = 0.0;    // exclusive
  double weight = 1.0;

  double length() const { return end - start; }
};

struct RelativeBurstProfile {
  std::string entity_id;
  std::vector<Interval> intervals;  // disjoint, sorted, within [0, 1]
};

// Interval weights are peak / max peak of the set, used only by the
// peak-weighted variant.
RelativeBurstProfile to_relative_profile(const BurstSet& bs,
                                         std::string entity_id = {});

enum class BsimVariant { kJaccard, kPeakWeighted };

// Overlap over union of burst regions, in [0, 1]. Two burst-free profiles
// are identical (1.0); exactly one burst-free profile gives 0.0.
double bsim(const RelativeBurstProfile& a, const RelativeBurstProfile& b,
            BsimVariant variant = BsimVariant::kJaccard);

// Symmetric dissimilarity in condensed upper-triangular storage.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(std::size_t n, std::vector<std::string> ids);

  // Validates symmetry, a zero diagonal and nonnegative finite entries.
  static DistanceMatrix from_square(const std::vector<std::vector<double>>& m,
                                    std::vector<std::string> ids = {});

  static std::size_t condensed_index(std::size_t n, std::size_t i,
                                     std::size_t j);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, double v);
  std::span<const double> condensed() const { return data_; }
  std::span<double> condensed() { return data_; }
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
  std::vector<std::string> ids_;
};

struct MatrixOptions {
  BsimVariant variant = BsimVariant::kJaccard;
  int workers = 1;
};

// L2 norms of the rows of the similarity matrix (diagonal included).
std::vector<double> similarity_row_norms(
    const std::vector<RelativeBurstProfile>& profiles,
    const MatrixOptions& options);

// Distance between profiles i and j given their similarity and row norms.
double adjusted_distance(double similarity, double norm_i, double norm_j);

// Throws InputError for fewer than two profiles.
DistanceMatrix build_distance_matrix(
    const std::vector<RelativeBurstProfile>& profiles,
    const MatrixOptions& options = {});

// Unadjusted 1 - (SM/r_i + SM/r_j)/2 as a full square CSV, diagonal
// included.
std::string raw_distance_csv(const std::vector<RelativeBurstProfile>& profiles,
                             const MatrixOptions& options = {});

std::string distance_matrix_csv(const DistanceMatrix& dm);

// Binary tile file. Layout, all integers and floats little-endian:
//   "EMDMTIL1" | u64 n | u64 tile | u32 len + config hash |
//   n x (u32 len + entity id) | tiles
// Tiles cover the upper triangle row-major, (ti, tj) with ti <= tj; each is
// a dense rows x cols block of f64 (lower part of diagonal tiles mirrored).
//
// The writer computes tiles directly from the profiles and keeps a single
// tile of at most `mem_budget` bytes resident, so the full matrix is never
// materialized.
void write_distance_tiles(const std::vector<RelativeBurstProfile>& profiles,
                          const MatrixOptions& options,
                          const std::string& path, std::uint64_t mem_budget,
                          const std::string& config_hash);

void write_distance_tiles(const DistanceMatrix& dm, const std::string& path,
                          std::uint64_t mem_budget,
                          const std::string& config_hash);

struct TileFileInfo {
  std::uint64_t n = 0;
  std::uint64_t tile = 0;
  std::string config_hash;
};

DistanceMatrix read_distance_tiles(const std::string& path,
                                   TileFileInfo* info = nullptr);
TileFileInfo read_tile_header(const std::string& path);

// Tile edge length for a budget: the largest t with 8*t*t <= budget,
// clamped to [1, n].
std::uint64_t tile_size_for_budget(std::uint64_t n, std::uint64_t mem_budget);

}  // namespace emerge

#endif  // EMERGE_SIMILARITY_H_
