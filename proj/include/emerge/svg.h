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

#ifndef EMERGE_SVG_H_
#define EMERGE_SVG_H_

#include <span>
#include <string>

#include "emerge/analysis.h"
#include "emerge/bursts.h"

namespace emerge {

struct PlotStyle {
  int width = 640;
  int height = 320;
  int margin = 24;
  std::string line_color = "#1f6f3f";
  std::string band_color = "#8fd19e";
};

// Mean curve with a lighter mean +/- std band. Axes are unlabeled because
// the values are standardized and time is relative. `comment` is embedded
// verbatim in a leading XML comment.
std::string signature_svg(const GroupSignature& sig, const std::string& title,
                          const std::string& comment = {},
                          const PlotStyle& style = {});

// Raw daily counts, the moving average and shaded burst intervals.
std::string burst_plot_svg(std::span<const double> series,
                           const BurstSet& bursts, const std::string& title,
                           const std::string& comment = {},
                           const PlotStyle& style = {});

}  // namespace emerge

#endif  // EMERGE_SVG_H_
