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

#ifndef EMERGE_CLUSTERING_H_
#define EMERGE_CLUSTERING_H_

#include <cstddef>
#include <string>
#include <vector>

#include "emerge/similarity.h"

namespace emerge {

// One agglomeration step. Leaves are nodes 0..n-1; the k-th merge creates
// node n+k. left < right.
struct Merge {
  std::size_t left = 0;
  std::size_t right = 0;
  double height = 0.0;
  std::size_t size = 0;

  bool operator==(const Merge&) const = default;
};

struct Dendrogram {
  std::vector<Merge> merges;  // n-1 entries, heights nondecreasing
  std::vector<std::string> leaf_ids;

  std::size_t n_leaves() const { return leaf_ids.size(); }
  std::size_t root() const { return 2 * n_leaves() - 2; }
};

// Ward linkage via the nearest-neighbour chain in O(n^2) time. The
// Lance-Williams update is applied to squared input distances:
//
//   d2(ij, k) = ((ni+nk) d2(i,k) + (nj+nk) d2(j,k) - nk d2(i,j)) / (ni+nj+nk)
//
// Input distances need not be Euclidean. Ties prefer the previous chain
// element, then the smallest index, so output is deterministic.
Dendrogram hac_ward(const DistanceMatrix& dm);

struct FlatClustering {
  std::vector<int> labels;  // per leaf, 0..k-1 by first appearance
  int k = 0;
};

// Undoes the k-1 highest merges. Throws InputError unless 1 <= k <= n.
FlatClustering cut(const Dendrogram& d, std::size_t k);

struct SummaryNode {
  std::size_t node = 0;
  double height = 0.0;  // 0 for leaves
  std::size_t size = 0;
  int depth = 0;
  bool collapsed = false;    // internal node shown as a leaf group
  std::vector<int> children; // indices into DendrogramSummary::nodes
};

struct DendrogramSummary {
  std::vector<SummaryNode> nodes;  // nodes[0] is the root
  int levels = 0;
};

// Keeps the top `levels` merge generations below the root; deeper subtrees
// collapse into leaf groups annotated with their member counts.
DendrogramSummary truncate(const Dendrogram& d, int levels);

std::string dendrogram_json(const Dendrogram& d);
Dendrogram dendrogram_from_json(const std::string& text);
std::string summary_json(const DendrogramSummary& s, const Dendrogram& d);
std::string flat_clustering_csv(const FlatClustering& fc,
                                const std::vector<std::string>& ids);

}  // namespace emerge

#endif  // EMERGE_CLUSTERING_H_
