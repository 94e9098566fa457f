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

#include "emerge/clustering.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include <fmt/format.h>
#include <json.hpp>

namespace emerge {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // Returns the new root.
  std::size_t join(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    parent_[a] = b;
    return b;
  }

 private:
  std::vector<std::size_t> parent_;
};

struct RawMerge {
  std::size_t a;  // slot (a member leaf) of each side
  std::size_t b;
  double height;
};

}  // namespace

Dendrogram hac_ward(const DistanceMatrix& dm) {
  const std::size_t n = dm.size();
  if (n < 2) throw InputError("clustering needs at least two entities");
  for (double v : dm.condensed()) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InputError("distance matrix has negative or non-finite entries");
    }
  }

  std::vector<double> d2(dm.condensed().begin(), dm.condensed().end());
  for (double& v : d2) v *= v;
  auto at = [&](std::size_t i, std::size_t j) -> double& {
    return d2[DistanceMatrix::condensed_index(n, i, j)];
  };

  std::vector<std::size_t> size(n, 1);
  std::vector<char> active(n, 1);
  std::vector<double> slot_height(n, 0.0);
  std::vector<std::size_t> chain;
  std::vector<RawMerge> raw;
  raw.reserve(n - 1);

  for (std::size_t remaining = n; remaining > 1; --remaining) {
    if (chain.empty()) {
      std::size_t first = 0;
      while (!active[first]) ++first;
      chain.push_back(first);
    }
    std::size_t x = 0, y = 0;
    double best = 0.0;
    for (;;) {
      x = chain.back();
      const bool has_prev = chain.size() >= 2;
      const std::size_t prev = has_prev ? chain[chain.size() - 2] : n;
      best = has_prev ? at(x, prev) : std::numeric_limits<double>::infinity();
      y = prev;
      for (std::size_t i = 0; i < n; ++i) {
        if (!active[i] || i == x) continue;
        const double v = at(x, i);
        if (v < best) {
          best = v;
          y = i;
        }
      }
      if (has_prev && y == prev) break;
      chain.push_back(y);
    }
    chain.pop_back();
    chain.pop_back();

    const std::size_t a = std::min(x, y), b = std::max(x, y);
    const double na = static_cast<double>(size[a]);
    const double nb = static_cast<double>(size[b]);
    const double dab = at(a, b);
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == a || k == b) continue;
      const double nk = static_cast<double>(size[k]);
      double v = ((na + nk) * at(a, k) + (nb + nk) * at(b, k) - nk * dab) /
                 (na + nb + nk);
      at(b, k) = std::max(v, 0.0);
    }
    // Rounding can put a parent a hair below its children; clamp so the
    // height order stays a valid merge order.
    double h = std::sqrt(dab);
    h = std::max({h, slot_height[a], slot_height[b]});
    raw.push_back(RawMerge{a, b, h});
    slot_height[b] = h;
    size[b] += size[a];
    active[a] = 0;
  }

  std::stable_sort(raw.begin(), raw.end(),
                   [](const RawMerge& p, const RawMerge& q) {
                     return p.height < q.height;
                   });

  Dendrogram d;
  d.leaf_ids = dm.ids();
  d.merges.reserve(n - 1);
  UnionFind uf(n);
  std::vector<std::size_t> node_of(n);
  std::iota(node_of.begin(), node_of.end(), 0);
  std::vector<std::size_t> cluster_size(n, 1);
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const std::size_t ra = uf.find(raw[k].a), rb = uf.find(raw[k].b);
    Merge m;
    m.left = std::min(node_of[ra], node_of[rb]);
    m.right = std::max(node_of[ra], node_of[rb]);
    m.height = raw[k].height;
    m.size = cluster_size[ra] + cluster_size[rb];
    const std::size_t root = uf.join(ra, rb);
    node_of[root] = n + k;
    cluster_size[root] = m.size;
    d.merges.push_back(m);
  }
  return d;
}

FlatClustering cut(const Dendrogram& d, std::size_t k) {
  const std::size_t n = d.n_leaves();
  if (k < 1 || k > n) {
    throw InputError(fmt::format("cut k={} outside [1, {}]", k, n));
  }
  UnionFind uf(2 * n);
  // Node ids map to union-find slots directly; merged nodes point at their
  // children.
  for (std::size_t m = 0; m + k < n; ++m) {
    uf.join(d.merges[m].left, n + m);
    uf.join(d.merges[m].right, n + m);
  }
  FlatClustering fc;
  fc.k = static_cast<int>(k);
  fc.labels.assign(n, -1);
  std::vector<int> label_of(2 * n, -1);
  int next = 0;
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    std::size_t r = uf.find(leaf);
    if (label_of[r] < 0) label_of[r] = next++;
    fc.labels[leaf] = label_of[r];
  }
  return fc;
}

DendrogramSummary truncate(const Dendrogram& d, int levels) {
  DendrogramSummary s;
  s.levels = levels;
  const std::size_t n = d.n_leaves();
  if (n == 0) return s;
  auto node_size = [&](std::size_t node) {
    return node < n ? std::size_t{1} : d.merges[node - n].size;
  };
  struct Pending {
    std::size_t node;
    int depth;
    int parent;
  };
  std::vector<Pending> queue{{n == 1 ? 0 : d.root(), 0, -1}};
  // Breadth-first so nodes come out level by level.
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Pending p = queue[head];
    SummaryNode out;
    out.node = p.node;
    out.size = node_size(p.node);
    out.depth = p.depth;
    const bool internal = p.node >= n;
    if (internal) out.height = d.merges[p.node - n].height;
    const int index = static_cast<int>(s.nodes.size());
    if (p.parent >= 0) s.nodes[p.parent].children.push_back(index);
    if (internal && p.depth < levels) {
      const Merge& m = d.merges[p.node - n];
      queue.push_back({m.left, p.depth + 1, index});
      queue.push_back({m.right, p.depth + 1, index});
    } else {
      out.collapsed = internal;
    }
    s.nodes.push_back(std::move(out));
  }
  return s;
}

std::string dendrogram_json(const Dendrogram& d) {
  nlohmann::ordered_json j;
  j["n"] = d.n_leaves();
  j["leaves"] = d.leaf_ids;
  auto merges = nlohmann::ordered_json::array();
  for (const Merge& m : d.merges) {
    merges.push_back({m.left, m.right, m.height, m.size});
  }
  j["merges"] = std::move(merges);
  return j.dump();
}

Dendrogram dendrogram_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.contains("leaves") || !j.contains("merges")) {
    throw InputError("malformed dendrogram JSON");
  }
  Dendrogram d;
  d.leaf_ids = j["leaves"].get<std::vector<std::string>>();
  for (const auto& m : j["merges"]) {
    d.merges.push_back(Merge{m.at(0).get<std::size_t>(),
                             m.at(1).get<std::size_t>(),
                             m.at(2).get<double>(),
                             m.at(3).get<std::size_t>()});
  }
  if (d.leaf_ids.size() < 2 || d.merges.size() + 1 != d.leaf_ids.size()) {
    throw InputError("dendrogram merge count does not match its leaves");
  }
  return d;
}

std::string summary_json(const DendrogramSummary& s, const Dendrogram& d) {
  const std::size_t n = d.n_leaves();
  std::function<nlohmann::ordered_json(int)> emit = [&](int idx) {
    const SummaryNode& node = s.nodes[idx];
    nlohmann::ordered_json j;
    j["node"] = node.node;
    j["size"] = node.size;
    j["depth"] = node.depth;
    if (node.node < n) {
      j["entity_id"] = d.leaf_ids[node.node];
    } else {
      j["height"] = node.height;
    }
    if (node.collapsed) j["collapsed"] = true;
    if (!node.children.empty()) {
      auto kids = nlohmann::ordered_json::array();
      for (int c : node.children) kids.push_back(emit(c));
      j["children"] = std::move(kids);
    }
    return j;
  };
  nlohmann::ordered_json out;
  out["levels"] = s.levels;
  out["node_count"] = s.nodes.size();
  if (!s.nodes.empty()) out["root"] = emit(0);
  return out.dump(1);
}

std::string flat_clustering_csv(const FlatClustering& fc,
                                const std::vector<std::string>& ids) {
  std::string out = "entity_id,cluster\n";
  for (std::size_t i = 0; i < fc.labels.size(); ++i) {
    out += fmt::format("{},{}\n", ids[i], fc.labels[i]);
  }
  return out;
}

}  // namespace emerge
