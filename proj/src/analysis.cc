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

#include "emerge/analysis.h"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>
#include <json.hpp>

namespace emerge {

using ojson = nlohmann::ordered_json;

GroupSignature group_signature(const std::vector<std::vector<double>>& members,
                               const SignatureOptions& options) {
  if (members.empty()) throw InputError("signature of an empty group");
  std::size_t length = 0;
  if (options.length) {
    length = *options.length;
  } else {
    for (const auto& m : members) length = std::max(length, m.size());
  }
  if (options.max_length > 0) {
    length = std::min(length, std::max<std::size_t>(options.max_length, 2));
  }
  if (length == 0) throw InputError("signature length must be >= 1");

  GroupSignature sig;
  sig.length = length;
  sig.n_members = members.size();
  // Welford updates; identical members give an exactly zero spread.
  std::vector<double> mean_acc(length, 0.0), m2(length, 0.0);
  double count = 0.0;
  for (const auto& m : members) {
    if (m.empty()) throw InputError("signature member is empty");
    auto z = standardize(m);
    // A single-sample member cannot be stretched by interpolation; it is a
    // constant, which standardizes to zero everywhere.
    auto curve = z.size() == 1 ? std::vector<double>(length, z[0])
                               : interpolate(z, length);
    count += 1.0;
    for (std::size_t i = 0; i < length; ++i) {
      const double delta = curve[i] - mean_acc[i];
      mean_acc[i] += delta / count;
      m2[i] += delta * (curve[i] - mean_acc[i]);
    }
  }
  sig.mean_curve = std::move(mean_acc);
  sig.std_curve.resize(length);
  for (std::size_t i = 0; i < length; ++i) {
    sig.std_curve[i] = std::sqrt(std::max(0.0, m2[i] / count));
  }
  return sig;
}

EntityFeatures entity_features(const EmergenceSeries& series,
                               const BurstSet& bursts) {
  EntityFeatures f;
  f.duration = static_cast<double>(series.duration());
  f.volume = static_cast<double>(series.volume());
  f.velocity = f.volume / f.duration;
  const BurstStats bs = burst_stats(bursts);
  f.n_bursts = static_cast<double>(bs.n_bursts);
  f.burst_duration = bs.mean_norm_duration;
  f.burst_value = bs.mean_norm_value;
  return f;
}

GroupStats descriptive_stats(std::span<const EntityFeatures> group,
                             std::string name) {
  if (group.empty()) throw InputError("descriptive statistics of an empty group");
  GroupStats g;
  g.group = std::move(name);
  g.n = group.size();
  std::vector<double> dur, vol, vel, nb, bdur, bval;
  for (const auto& f : group) {
    dur.push_back(f.duration);
    vol.push_back(f.volume);
    vel.push_back(f.velocity);
    nb.push_back(f.n_bursts);
    if (f.n_bursts > 0) {
      bdur.push_back(f.burst_duration);
      bval.push_back(f.burst_value);
    }
  }
  g.duration = summarize(dur);
  g.volume = summarize(vol);
  g.velocity = summarize(vel);
  g.n_bursts = summarize(nb);
  g.n_with_bursts = bdur.size();
  g.burst_duration = summarize(bdur);
  g.burst_value = summarize(bval);
  return g;
}

std::string_view stream_group_name(StreamGroup g) {
  switch (g) {
    case StreamGroup::kNewsFirst: return "news_first";
    case StreamGroup::kSocialFirst: return "social_first";
    case StreamGroup::kSameTime: return "same_time";
    case StreamGroup::kOnlyNews: return "only_news";
    case StreamGroup::kOnlySocial: return "only_social";
  }
  return "?";
}

StreamGroup classify_streams(const EmergingEntity& e) {
  auto news = e.first_day(Stream::kNews);
  auto social = e.first_day(Stream::kSocial);
  if (news && social) {
    if (*news < *social) return StreamGroup::kNewsFirst;
    if (*social < *news) return StreamGroup::kSocialFirst;
    return StreamGroup::kSameTime;
  }
  return news ? StreamGroup::kOnlyNews : StreamGroup::kOnlySocial;
}

StreamPartition partition_by_stream(const Dataset& dataset) {
  StreamPartition p;
  for (std::size_t i = 0; i < dataset.entities.size(); ++i) {
    p.groups[static_cast<int>(classify_streams(dataset.entities[i]))]
        .push_back(i);
  }
  return p;
}

LagSummary cross_stream_lag(const Dataset& dataset) {
  LagSummary s;
  double news_lag = 0.0, social_lag = 0.0;
  for (const auto& e : dataset.entities) {
    auto news = e.first_day(Stream::kNews);
    auto social = e.first_day(Stream::kSocial);
    if (!news || !social) continue;
    if (*news < *social) {
      news_lag += static_cast<double>(*social - *news);
      ++s.n_news_first;
    } else if (*social < *news) {
      social_lag += static_cast<double>(*news - *social);
      ++s.n_social_first;
    } else {
      ++s.n_same_time;
    }
  }
  if (s.n_news_first + s.n_social_first + s.n_same_time == 0) {
    throw InputError("no entity is mentioned in both streams");
  }
  if (s.n_news_first > 0) {
    s.news_to_social = news_lag / static_cast<double>(s.n_news_first);
  }
  if (s.n_social_first > 0) {
    s.social_to_news = social_lag / static_cast<double>(s.n_social_first);
  }
  return s;
}

std::vector<StreamGroupRow> stream_report(
    const Dataset& dataset, const StreamPartition& partition,
    std::span<const EntityFeatures> features) {
  std::vector<StreamGroupRow> rows;
  for (int g = 0; g < kNumStreamGroups; ++g) {
    const auto& members = partition.groups[g];
    if (members.empty()) continue;
    std::vector<EntityFeatures> group;
    std::vector<double> news_dur, social_dur;
    for (std::size_t i : members) {
      group.push_back(features[i]);
      const auto& e = dataset.entities[i];
      if (auto d = e.first_day(Stream::kNews)) {
        news_dur.push_back(static_cast<double>(e.creation_day - *d));
      }
      if (auto d = e.first_day(Stream::kSocial)) {
        social_dur.push_back(static_cast<double>(e.creation_day - *d));
      }
    }
    StreamGroupRow row;
    row.stats = descriptive_stats(
        group, std::string(stream_group_name(static_cast<StreamGroup>(g))));
    if (!news_dur.empty()) row.news_duration = summarize(news_dur);
    if (!social_dur.empty()) row.social_duration = summarize(social_dur);
    rows.push_back(std::move(row));
  }
  return rows;
}

TypeReport type_report(const Dataset& dataset,
                       std::span<const EntityFeatures> features,
                       std::size_t min_count) {
  TypeReport report;
  report.min_count = min_count;
  std::map<std::string, std::vector<std::size_t>> by_type;
  std::vector<std::size_t> null_class;
  for (std::size_t i = 0; i < dataset.entities.size(); ++i) {
    const auto& labels = dataset.entities[i].type_labels;
    if (labels.empty()) null_class.push_back(i);
    for (const auto& t : labels) by_type[t].push_back(i);
  }
  auto make_row = [&](const std::string& name,
                      const std::vector<std::size_t>& members) {
    TypeRow row;
    row.type = name;
    std::vector<EntityFeatures> group;
    std::vector<double> views;
    for (std::size_t i : members) {
      group.push_back(features[i]);
      if (auto pv = dataset.entities[i].pageviews) {
        views.push_back(static_cast<double>(*pv));
      }
    }
    row.stats = descriptive_stats(group, name);
    row.n_pageviews = views.size();
    if (!views.empty()) row.pageviews = summarize(views);
    return row;
  };
  for (const auto& [type, members] : by_type) {
    if (members.size() >= min_count) report.rows.push_back(make_row(type, members));
  }
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const TypeRow& a, const TypeRow& b) {
                     return a.stats.n > b.stats.n;
                   });
  if (!null_class.empty()) {
    report.rows.push_back(make_row("null", null_class));
    report.rows.back().null_class = true;
  }

  std::vector<std::size_t> order(report.rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ra = report.rows[a];
    const auto& rb = report.rows[b];
    if (ra.pageviews.has_value() != rb.pageviews.has_value()) {
      return ra.pageviews.has_value();
    }
    if (ra.pageviews && ra.pageviews->mean != rb.pageviews->mean) {
      return ra.pageviews->mean > rb.pageviews->mean;
    }
    return ra.type < rb.type;
  });
  for (std::size_t r = 0; r < order.size(); ++r) {
    report.rows[order[r]].popularity_rank = static_cast<int>(r + 1);
  }
  return report;
}

namespace {

struct StatisticDef {
  const char* name;
  double EntityFeatures::*field;
  bool bursting_only;
};

constexpr StatisticDef kStatistics[] = {
    {"duration", &EntityFeatures::duration, false},
    {"volume", &EntityFeatures::volume, false},
    {"velocity", &EntityFeatures::velocity, false},
    {"n_bursts", &EntityFeatures::n_bursts, false},
    {"burst_duration", &EntityFeatures::burst_duration, true},
    {"burst_value", &EntityFeatures::burst_value, true},
};

}  // namespace

SignificanceReport significance_report(
    const std::vector<std::string>& names,
    const std::vector<std::vector<EntityFeatures>>& groups, double alpha) {
  if (names.size() != groups.size()) {
    throw InputError("group names do not match groups");
  }
  SignificanceReport report;
  report.alpha = alpha;
  report.groups = names;
  for (const auto& def : kStatistics) {
    StatisticTest t;
    t.statistic = def.name;
    std::vector<std::vector<double>> values(groups.size());
    std::size_t total = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      for (const auto& f : groups[g]) {
        if (def.bursting_only && f.n_bursts <= 0) continue;
        values[g].push_back(f.*def.field);
      }
      total += values[g].size();
    }
    t.smallest_group = values.empty() ? 0 : values[0].size();
    bool usable = groups.size() >= 2 && total >= 3;
    for (const auto& v : values) {
      t.smallest_group = std::min(t.smallest_group, v.size());
      if (v.empty()) usable = false;
    }
    if (usable) {
      t.tested = true;
      t.omnibus = kruskal_wallis(values);
      const DunnResult dunn = dunn_posthoc(values);
      for (std::size_t i = 0; i < values.size(); ++i) {
        for (std::size_t j = i + 1; j < values.size(); ++j) {
          t.pairs.push_back(PairwiseTest{names[i], names[j], dunn.z[i][j],
                                         dunn.p_raw[i][j],
                                         dunn.p_adjusted[i][j]});
        }
      }
    }
    report.tests.push_back(std::move(t));
  }
  return report;
}

namespace {

std::string summary_cells(const Summary& s) {
  return fmt::format("{},{},{}", s.mean, s.std, s.median);
}

std::string optional_cells(const std::optional<Summary>& s) {
  return s ? summary_cells(*s) : std::string(",,");
}

const char kStatsHeader[] =
    "n,duration_mean,duration_std,duration_median,volume_mean,volume_std,"
    "volume_median,velocity_mean,velocity_std,velocity_median,n_bursts_mean,"
    "n_bursts_std,n_bursts_median,n_with_bursts,burst_duration_mean,"
    "burst_duration_std,burst_duration_median,burst_value_mean,"
    "burst_value_std,burst_value_median";

std::string stats_cells(const GroupStats& g) {
  return fmt::format("{},{},{},{},{},{},{},{}", g.n, summary_cells(g.duration),
                     summary_cells(g.volume), summary_cells(g.velocity),
                     summary_cells(g.n_bursts), g.n_with_bursts,
                     summary_cells(g.burst_duration),
                     summary_cells(g.burst_value));
}

ojson summary_json(const Summary& s) {
  return ojson{{"mean", s.mean}, {"std", s.std}, {"median", s.median}};
}

ojson stats_json(const GroupStats& g) {
  ojson j;
  j["group"] = g.group;
  j["n"] = g.n;
  j["duration"] = summary_json(g.duration);
  j["volume"] = summary_json(g.volume);
  j["velocity"] = summary_json(g.velocity);
  j["n_bursts"] = summary_json(g.n_bursts);
  j["n_with_bursts"] = g.n_with_bursts;
  j["burst_duration"] = summary_json(g.burst_duration);
  j["burst_value"] = summary_json(g.burst_value);
  return j;
}

}  // namespace

std::string group_stats_csv(const std::vector<GroupStats>& rows) {
  std::size_t total = 0;
  for (const auto& r : rows) total += r.n;
  std::string out = fmt::format("group,proportion,{}\n", kStatsHeader);
  for (const auto& r : rows) {
    const double prop =
        total ? static_cast<double>(r.n) / static_cast<double>(total) : 0.0;
    out += fmt::format("{},{},{}\n", r.group, prop, stats_cells(r));
  }
  return out;
}

std::string stream_report_csv(const std::vector<StreamGroupRow>& rows) {
  std::string out = fmt::format(
      "stream,{},news_duration_mean,news_duration_std,news_duration_median,"
      "social_duration_mean,social_duration_std,social_duration_median\n",
      kStatsHeader);
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{}\n", r.stats.group, stats_cells(r.stats),
                       optional_cells(r.news_duration),
                       optional_cells(r.social_duration));
  }
  return out;
}

std::string type_report_csv(const TypeReport& report) {
  std::string out = fmt::format(
      "type,{},n_pageviews,pageviews_mean,pageviews_std,pageviews_median,"
      "popularity_rank\n",
      kStatsHeader);
  for (const auto& r : report.rows) {
    out += fmt::format("{},{},{},{},{}\n", r.type, stats_cells(r.stats),
                       r.n_pageviews, optional_cells(r.pageviews),
                       r.popularity_rank);
  }
  return out;
}

std::string significance_csv(const SignificanceReport& report) {
  std::string out =
      "statistic,comparison,test_statistic,p_raw,p_adjusted,significant\n";
  for (const auto& t : report.tests) {
    if (!t.tested) {
      out += fmt::format("{},kruskal_wallis,,,,untested\n", t.statistic);
      continue;
    }
    out += fmt::format("{},kruskal_wallis,{},{},{},{}\n", t.statistic,
                       t.omnibus.h, t.omnibus.p, t.omnibus.p,
                       t.omnibus.p < report.alpha ? "yes" : "no");
    for (const auto& p : t.pairs) {
      out += fmt::format("{},{} vs {},{},{},{},{}\n", t.statistic, p.group_a,
                         p.group_b, p.z, p.p_raw, p.p_adjusted,
                         p.p_adjusted < report.alpha ? "yes" : "no");
    }
  }
  out += fmt::format(
      "# alpha={}; chi-square approximation for Kruskal-Wallis p-values is "
      "reliable when every group has at least 5 observations\n",
      report.alpha);
  return out;
}

std::string signature_csv(const GroupSignature& sig) {
  std::string out = "position,relative_time,mean,std\n";
  for (std::size_t i = 0; i < sig.length; ++i) {
    const double rel = sig.length > 1 ? static_cast<double>(i) /
                                            static_cast<double>(sig.length - 1)
                                      : 0.0;
    out += fmt::format("{},{},{},{}\n", i, rel, sig.mean_curve[i],
                       sig.std_curve[i]);
  }
  return out;
}

std::string group_stats_json(const std::vector<GroupStats>& rows) {
  auto arr = ojson::array();
  for (const auto& r : rows) arr.push_back(stats_json(r));
  return arr.dump(1);
}

std::string stream_report_json(const std::vector<StreamGroupRow>& rows,
                               const std::optional<LagSummary>& lags) {
  ojson j;
  auto arr = ojson::array();
  for (const auto& r : rows) {
    ojson row = stats_json(r.stats);
    if (r.news_duration) row["news_duration"] = summary_json(*r.news_duration);
    if (r.social_duration) {
      row["social_duration"] = summary_json(*r.social_duration);
    }
    arr.push_back(std::move(row));
  }
  j["groups"] = std::move(arr);
  if (lags) {
    ojson l;
    l["news_to_social_mean_days"] =
        lags->news_to_social ? ojson(*lags->news_to_social) : ojson(nullptr);
    l["social_to_news_mean_days"] =
        lags->social_to_news ? ojson(*lags->social_to_news) : ojson(nullptr);
    l["n_news_first"] = lags->n_news_first;
    l["n_social_first"] = lags->n_social_first;
    l["n_same_time"] = lags->n_same_time;
    j["lags"] = std::move(l);
  }
  return j.dump(1);
}

std::string type_report_json(const TypeReport& report) {
  ojson j;
  j["min_count"] = report.min_count;
  auto arr = ojson::array();
  for (const auto& r : report.rows) {
    ojson row = stats_json(r.stats);
    row["null_class"] = r.null_class;
    row["n_pageviews"] = r.n_pageviews;
    if (r.pageviews) row["pageviews"] = summary_json(*r.pageviews);
    row["popularity_rank"] = r.popularity_rank;
    arr.push_back(std::move(row));
  }
  j["rows"] = std::move(arr);
  return j.dump(1);
}

std::string significance_json(const SignificanceReport& report) {
  ojson j;
  j["alpha"] = report.alpha;
  j["groups"] = report.groups;
  auto tests = ojson::array();
  for (const auto& t : report.tests) {
    ojson row;
    row["statistic"] = t.statistic;
    row["tested"] = t.tested;
    row["smallest_group"] = t.smallest_group;
    if (t.tested) {
      row["kruskal_wallis"] = {{"h", t.omnibus.h},
                               {"p", t.omnibus.p},
                               {"df", t.omnibus.df}};
      auto pairs = ojson::array();
      for (const auto& p : t.pairs) {
        pairs.push_back({{"a", p.group_a},
                         {"b", p.group_b},
                         {"z", p.z},
                         {"p_raw", p.p_raw},
                         {"p_adjusted", p.p_adjusted},
                         {"significant", p.p_adjusted < report.alpha}});
      }
      row["dunn"] = std::move(pairs);
    }
    tests.push_back(std::move(row));
  }
  j["tests"] = std::move(tests);
  j["note"] =
      "chi-square approximation for Kruskal-Wallis p-values is reliable when "
      "every group has at least 5 observations";
  return j.dump(1);
}

}  // namespace emerge
