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

#include "emerge/common.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace emerge {

namespace {

std::optional<Day> parse_int(std::string_view s) {
  Day v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

}  // namespace

DaySpan parse_span(std::string_view text) {
  // Negative bounds are allowed, so split on the first ':' after position 0.
  auto colon = text.find(':', 1);
  if (colon == std::string_view::npos) {
    throw InputError("span must look like A:B, got '" + std::string(text) +
                     "'");
  }
  auto a = parse_int(text.substr(0, colon));
  auto b = parse_int(text.substr(colon + 1));
  if (!a || !b || *a > *b) {
    throw InputError("invalid span '" + std::string(text) + "'");
  }
  return DaySpan{*a, *b};
}

std::string_view stream_name(Stream s) {
  return s == Stream::kNews ? "news" : "social";
}

std::optional<Stream> parse_stream(std::string_view s) {
  if (s == "news") return Stream::kNews;
  if (s == "social") return Stream::kSocial;
  return std::nullopt;
}

void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& fn) {
  const std::size_t threads =
      std::min<std::size_t>(std::max(workers, 1), n == 0 ? 1 : n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto body = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace emerge
