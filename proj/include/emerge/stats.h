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

// Rank-based significance tests: Kruskal-Wallis omnibus test followed by
// Dunn's pairwise comparisons with Holm-Bonferroni adjustment.

#ifndef EMERGE_STATS_H_
#define EMERGE_STATS_H_

#include <span>
#include <vector>

namespace emerge {

struct Summary {
  double mean = 0.0;
  double std = 0.0;  // population
  double median = 0.0;
};

// Median averages the two middle order statistics for even sizes.
Summary summarize(std::span<const double> xs);
double median(std::span<const double> xs);

// Mid-ranks (1-based) of the pooled values; ties share their average rank.
std::vector<double> midranks(std::span<const double> pooled);

struct KruskalWallisResult {
  double h = 0.0;
  double p = 1.0;
  int df = 0;
};

// Tie-corrected H with a chi-square(g-1) p-value. When every value is
// identical H is reported as 0 and p as 1. Throws InputError for fewer than
// two groups, an empty group or fewer than three values in total.
KruskalWallisResult kruskal_wallis(const std::vector<std::vector<double>>& groups);

// Holm step-down adjustment; output is in input order.
std::vector<double> holm_adjust(std::span<const double> p);

struct DunnResult {
  std::vector<std::vector<double>> z;           // antisymmetric
  std::vector<std::vector<double>> p_raw;       // symmetric, unit diagonal
  std::vector<std::vector<double>> p_adjusted;  // Holm over all pairs
};

// Two-sided Dunn tests with the tie-corrected variance
//   (N(N+1)/12 - sum(t^3 - t) / (12(N-1))) (1/n_i + 1/n_j).
DunnResult dunn_posthoc(const std::vector<std::vector<double>>& groups);

}  // namespace emerge

#endif  // EMERGE_STATS_H_
