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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "emerge/analysis.h"
#include "emerge/bursts.h"
#include "oracles.h"

using namespace emerge;

namespace {

EmergingEntity entity(std::string id, Day creation,
                      std::vector<DayCount> news, std::vector<DayCount> social,
                      std::vector<std::string> types = {},
                      std::optional<std::uint64_t> pv = std::nullopt) {
  EmergingEntity e;
  e.entity_id = std::move(id);
  e.creation_day = creation;
  e.news = std::move(news);
  e.social = std::move(social);
  e.type_labels = std::move(types);
  e.pageviews = pv;
  return e;
}

EntityFeatures features(double duration, double volume, double n_bursts = 0,
                        double bd = 0, double bv = 0) {
  return EntityFeatures{duration, volume, volume / duration, n_bursts, bd, bv};
}

}  // namespace

TEST_CASE("signature of identical members has zero spread") {
  const std::vector<double> m{1, 5, 2, 0, 3};
  const auto sig = group_signature({m, m, m});
  CHECK(sig.length == 5);
  CHECK(sig.n_members == 3);
  for (double s : sig.std_curve) CHECK(s == 0.0);
  const auto z = standardize(m);
  for (std::size_t i = 0; i < z.size(); ++i) {
    CHECK(sig.mean_curve[i] == doctest::Approx(z[i]).epsilon(1e-12));
  }
}

TEST_CASE("signature of a single member is its standardized curve") {
  const std::vector<double> m{0, 0, 4, 8};
  const auto sig = group_signature({m}, SignatureOptions{7, 0});
  CHECK(sig.length == 7);
  const auto want = interpolate(standardize(m), 7);
  for (std::size_t i = 0; i < 7; ++i) {
    CHECK(sig.mean_curve[i] == doctest::Approx(want[i]));
    CHECK(sig.std_curve[i] == 0.0);
  }
}

TEST_CASE("signature length defaults to the longest member and clamps") {
  const auto sig = group_signature({{1, 2}, {1, 2, 3, 4, 5, 6}});
  CHECK(sig.length == 6);
  CHECK(group_signature({{1, 2}, {1, 2, 3, 4, 5, 6}}, SignatureOptions{{}, 4})
            .length == 4);
  CHECK_THROWS_AS(group_signature({}), InputError);
}

TEST_CASE("early-burst members put the signature peak early") {
  std::mt19937_64 rng(7);
  std::vector<std::vector<double>> members;
  for (int i = 0; i < 30; ++i) {
    std::vector<double> s(50 + rng() % 200, 1.0);
    for (std::size_t d = 0; d < s.size() / 20 + 1; ++d) s[d] = 20.0;
    members.push_back(s);
  }
  const auto sig = group_signature(members);
  const auto am = std::max_element(sig.mean_curve.begin(), sig.mean_curve.end()) -
                  sig.mean_curve.begin();
  CHECK(static_cast<double>(am) < 0.1 * static_cast<double>(sig.length));
}

TEST_CASE("descriptive stats match the oracle and skip burst-free entities") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(1, 100);
  for (int t = 0; t < 100; ++t) {
    std::vector<EntityFeatures> g;
    std::vector<double> dur, vol, vel, nb, bd;
    const std::size_t n = 1 + rng() % 30;
    for (std::size_t i = 0; i < n; ++i) {
      const double b = static_cast<double>(rng() % 3);
      g.push_back(features(u(rng), u(rng), b, b > 0 ? u(rng) / 100 : 0, 0.1));
      dur.push_back(g.back().duration);
      vol.push_back(g.back().volume);
      vel.push_back(g.back().velocity);
      nb.push_back(b);
      if (b > 0) bd.push_back(g.back().burst_duration);
    }
    const auto s = descriptive_stats(g, "g");
    CHECK(s.n == n);
    CHECK(s.n_with_bursts == bd.size());
    auto near = [](const Summary& a, const oracle::Triple& o) {
      return std::abs(a.mean - o.mean) <= 1e-12 * std::max(1.0, std::abs(o.mean)) &&
             std::abs(a.std - o.std) <= 1e-12 * std::max(1.0, o.std) &&
             a.median == o.median;
    };
    CHECK(near(s.duration, oracle::straight_stats(dur)));
    CHECK(near(s.volume, oracle::straight_stats(vol)));
    CHECK(near(s.velocity, oracle::straight_stats(vel)));
    CHECK(near(s.n_bursts, oracle::straight_stats(nb)));
    CHECK(near(s.burst_duration, oracle::straight_stats(bd)));
  }
}

TEST_CASE("velocity is averaged per entity, not volume over duration") {
  // Median velocity differs from median volume / median duration.
  std::vector<EntityFeatures> g{features(1, 10), features(10, 10),
                                features(100, 1000)};
  const auto s = descriptive_stats(g);
  CHECK(s.velocity.median == doctest::Approx(10.0));
  CHECK(s.volume.median / s.duration.median == doctest::Approx(1.0));
}

TEST_CASE("features come from series and bursts") {
  EmergenceSeries s;
  s.values = {0, 2, 2, 0};
  BurstSet b;
  b.source_length = 4;
  b.series_total = 4;
  b.bursts = {Burst{1, 2, 2.0}};
  const auto f = entity_features(s, b);
  CHECK(f.duration == 4);
  CHECK(f.volume == 4);
  CHECK(f.velocity == 1);
  CHECK(f.n_bursts == 1);
  CHECK(f.burst_duration == doctest::Approx(0.5));
  CHECK(f.burst_value == doctest::Approx(0.5));
}

TEST_CASE("stream classification") {
  CHECK(classify_streams(entity("a", 10, {{1, 1, 1}}, {{2, 1, 1}})) ==
        StreamGroup::kNewsFirst);
  CHECK(classify_streams(entity("a", 10, {{3, 1, 1}}, {{2, 1, 1}})) ==
        StreamGroup::kSocialFirst);
  CHECK(classify_streams(entity("a", 10, {{2, 1, 1}}, {{2, 1, 1}})) ==
        StreamGroup::kSameTime);
  CHECK(classify_streams(entity("a", 10, {{2, 1, 1}}, {})) ==
        StreamGroup::kOnlyNews);
  CHECK(classify_streams(entity("a", 10, {}, {{2, 1, 1}})) ==
        StreamGroup::kOnlySocial);
}

TEST_CASE("stream partition is disjoint and covers every entity") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    Dataset ds;
    const std::size_t n = rng() % 40;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<DayCount> news, social;
      const int kind = static_cast<int>(rng() % 3);
      if (kind != 1) news.push_back({static_cast<Day>(rng() % 5), 1, 1});
      if (kind != 0) social.push_back({static_cast<Day>(rng() % 5), 1, 1});
      ds.entities.push_back(entity("e" + std::to_string(i), 9, news, social));
    }
    const auto p = partition_by_stream(ds);
    std::set<std::size_t> seen;
    std::size_t total = 0;
    for (const auto& g : p.groups) {
      total += g.size();
      seen.insert(g.begin(), g.end());
      CHECK(std::is_sorted(g.begin(), g.end()));
    }
    CHECK(total == n);
    CHECK(seen.size() == n);
  }
}

TEST_CASE("lags: one news-first entity, then a symmetric pair") {
  Dataset ds;
  ds.entities.push_back(entity("a", 20, {{1, 1, 1}}, {{5, 1, 1}}));
  auto lag = cross_stream_lag(ds);
  CHECK(lag.news_to_social == 4.0);
  CHECK(!lag.social_to_news.has_value());
  ds.entities.push_back(entity("b", 20, {{9, 1, 1}}, {{5, 1, 1}}));
  ds.entities.push_back(entity("c", 20, {{3, 1, 1}}, {{3, 1, 1}}));
  lag = cross_stream_lag(ds);
  CHECK(lag.news_to_social == lag.social_to_news);
  CHECK(lag.n_same_time == 1);
  Dataset none;
  none.entities.push_back(entity("x", 5, {{1, 1, 1}}, {}));
  CHECK_THROWS_AS(cross_stream_lag(none), InputError);
}

TEST_CASE("type report: multi-label entities count in each type") {
  Dataset ds;
  std::vector<EntityFeatures> f;
  for (int i = 0; i < 6; ++i) {
    std::vector<std::string> types;
    if (i < 4) types.push_back("Person");
    if (i >= 2 && i < 5) types.push_back("Work");
    ds.entities.push_back(entity("e" + std::to_string(i), 10, {{1, 1, 1}}, {},
                                 types, i == 5 ? std::nullopt
                                               : std::optional<std::uint64_t>(100 * i)));
    f.push_back(features(5, 1.0 + i));
  }
  const auto r = type_report(ds, f, 3);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[0].type == "Person");
  CHECK(r.rows[0].stats.n == 4);
  CHECK(r.rows[1].type == "Work");
  CHECK(r.rows[1].stats.n == 3);
  CHECK(r.rows[2].null_class);
  CHECK(r.rows[2].n_pageviews == 0);
  std::set<int> ranks;
  for (const auto& row : r.rows) ranks.insert(row.popularity_rank);
  CHECK(ranks == std::set<int>{1, 2, 3});
  // Work averages 300 views, Person 150.
  CHECK(r.rows[1].popularity_rank == 1);
  CHECK(r.rows[0].popularity_rank == 2);
  // A higher threshold drops the small types.
  CHECK(type_report(ds, f, 4).rows.size() == 2);
}

TEST_CASE("significance report flags well separated groups") {
  std::vector<std::vector<EntityFeatures>> groups(2);
  for (int i = 0; i < 40; ++i) {
    groups[0].push_back(features(10 + i % 5, 3, 1, 0.1, 0.1));
    groups[1].push_back(features(100 + i % 7, 3, 1, 0.1, 0.1));
  }
  const auto r = significance_report({"a", "b"}, groups);
  bool found = false;
  for (const auto& t : r.tests) {
    if (t.statistic == "duration") {
      found = true;
      CHECK(t.tested);
      CHECK(t.omnibus.p < 0.05);
      REQUIRE(t.pairs.size() == 1);
      CHECK(t.pairs[0].p_adjusted < 0.05);
    }
  }
  CHECK(found);
}
