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

#include "emerge/timeseries.h"

using namespace emerge;

namespace {

Dataset dataset_of(std::vector<MentionRecord> r, Day creation,
                   DaySpan span = {0, 1000}, int min_docs = 1) {
  EntityMeta m;
  m.entity_id = "E";
  m.creation_day = creation;
  return build_dataset(r, {m}, span, min_docs).dataset;
}

std::vector<double> random_series(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

}  // namespace

TEST_CASE("days {10,10,12} with creation 14 give [2,0,1,0]") {
  auto ds = dataset_of({{"a", 10, Stream::kNews, "E"},
                        {"b", 10, Stream::kSocial, "E"},
                        {"c", 12, Stream::kNews, "E"}},
                       14);
  const auto s = build_series(ds, "E");
  CHECK(s.start_day == 10);
  CHECK(s.values == std::vector<std::int64_t>{2, 0, 1, 0});
  REQUIRE(s.news);
  CHECK(*s.news == std::vector<std::int64_t>{1, 0, 1, 0});
  CHECK(*s.social == std::vector<std::int64_t>{1, 0, 0, 0});
  CHECK(s.creation_day() == 14);
}

TEST_CASE("a single mention the day before creation is a length-1 series") {
  auto ds = dataset_of({{"a", 10, Stream::kNews, "E"}}, 11);
  const auto s = build_series(ds, "E");
  CHECK(s.values == std::vector<std::int64_t>{1});
  CHECK(s.velocity() == 1.0);
}

TEST_CASE("unknown entity is an input error") {
  auto ds = dataset_of({{"a", 10, Stream::kNews, "E"}}, 11);
  CHECK_THROWS_AS(build_series(ds, "nope"), InputError);
}

TEST_CASE("occurrence counting counts repeated mentions") {
  auto ds = dataset_of({{"a", 3, Stream::kNews, "E"},
                        {"a", 3, Stream::kNews, "E"},
                        {"b", 4, Stream::kNews, "E"}},
                       6);
  CHECK(build_series(ds, "E").values == std::vector<std::int64_t>{1, 1, 0});
  CHECK(build_series(ds, "E", CountMode::kOccurrences).values ==
        std::vector<std::int64_t>{2, 1, 0});
}

TEST_CASE("two planted spike neighbourhoods are all that is nonzero") {
  // Spikes around relative days 50 and 270 of a 300-day life, nothing else.
  std::vector<MentionRecord> r;
  std::vector<bool> planted(300, false);
  int doc = 0;
  for (int centre : {50, 270}) {
    for (int d = centre - 3; d <= centre + 3; ++d) {
      planted[d] = true;
      const int n = 1 + (3 - std::abs(d - centre));
      for (int k = 0; k < n; ++k) {
        r.push_back({"d" + std::to_string(doc++), 1000 + d, Stream::kNews, "E"});
      }
    }
  }
  auto ds = dataset_of(r, 1300, {0, 2000});
  const auto s = build_series(ds, "E");
  CHECK(s.start_day == 1047);
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    CHECK((s.values[i] > 0) == planted[i + 47]);
  }
}

TEST_CASE("duration, volume and velocity agree exactly") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    std::vector<MentionRecord> r;
    const int n = 1 + static_cast<int>(rng() % 40);
    for (int k = 0; k < n; ++k) {
      r.push_back({"d" + std::to_string(k), static_cast<Day>(rng() % 100),
                   rng() % 2 ? Stream::kNews : Stream::kSocial, "E"});
    }
    auto ds = dataset_of(r, 150);
    const auto s = build_series(ds, "E");
    CHECK(s.duration() == s.creation_day() - s.start_day);
    CHECK(s.volume() == n);
    CHECK(s.velocity() * static_cast<double>(s.duration()) ==
          doctest::Approx(static_cast<double>(s.volume())).epsilon(1e-15));
    CHECK(s.values.front() >= 1);
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      CHECK((*s.news)[i] + (*s.social)[i] == s.values[i]);
    }
    // Permuting the records leaves the series unchanged.
    std::shuffle(r.begin(), r.end(), rng);
    CHECK(build_series(dataset_of(r, 150), "E").values == s.values);
  }
}

TEST_CASE("interpolate: linearity, identity and the [0,4,0] case") {
  const std::vector<double> a{1, 3};
  CHECK(interpolate(a, 3) == std::vector<double>{1, 2, 3});
  const std::vector<double> b{0, 4, 0};
  CHECK(interpolate(b, 5) == std::vector<double>{0, 2, 4, 2, 0});
  std::mt19937_64 rng(5);
  const auto x = random_series(rng, 17);
  CHECK(interpolate(x, 17) == x);
  const std::vector<double> one{7};
  CHECK(interpolate(one, 1) == one);
  CHECK(interpolate(one, 4) == std::vector<double>{7, 7, 7, 7});
  CHECK_THROWS_AS(interpolate(a, 0), InputError);
  CHECK_THROWS_AS(interpolate(a, 1), InputError);
}

TEST_CASE("interpolate preserves endpoints and monotonicity") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    auto x = random_series(rng, 2 + rng() % 30);
    std::sort(x.begin(), x.end());
    const auto y = interpolate(x, 2 + rng() % 80);
    CHECK(y.front() == x.front());
    CHECK(y.back() == x.back());
    CHECK(std::is_sorted(y.begin(), y.end()));
  }
}

TEST_CASE("standardize uses the population deviation") {
  const std::vector<double> x{1, 2, 3};
  const auto z = standardize(x);
  CHECK(z[0] == doctest::Approx(-1.224744871391589).epsilon(1e-12));
  CHECK(z[1] == doctest::Approx(0.0));
  CHECK(z[2] == doctest::Approx(1.224744871391589).epsilon(1e-12));
  CHECK(standardize(std::vector<double>{5, 5, 5}) ==
        std::vector<double>{0, 0, 0});
}

TEST_CASE("standardize: zero mean, unit deviation, idempotent") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 200; ++t) {
    const auto x = random_series(rng, 2 + rng() % 300);
    const auto z = standardize(x);
    CHECK(std::abs(mean(z)) < 1e-9);
    CHECK(std::abs(pstdev(z) - 1.0) < 1e-9);
    const auto zz = standardize(z);
    for (std::size_t i = 0; i < z.size(); ++i) {
      CHECK(std::abs(zz[i] - z[i]) < 1e-9);
    }
  }
}

TEST_CASE("series csv starts with id and start day") {
  auto ds = dataset_of({{"a", 10, Stream::kNews, "E"}}, 12);
  const auto csv = series_csv(build_all_series(ds));
  CHECK(csv.find("\nE,10,1,0\n") != std::string::npos);
}
