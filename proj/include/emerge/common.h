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

#ifndef EMERGE_COMMON_H_
#define EMERGE_COMMON_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace emerge {

// Calendar day index, counted from a configured epoch (UTC).
using Day = std::int64_t;

// Closed interval of days covered by a corpus.
struct DaySpan {
  Day start = 0;
  Day end = 0;

  bool contains(Day d) const { return d >= start && d <= end; }
  bool valid() const { return start <= end; }
  bool operator==(const DaySpan&) const = default;
};

// Parses "A:B" into a span. Throws InputError on malformed text.
DaySpan parse_span(std::string_view text);

enum class Stream : std::uint8_t { kNews = 0, kSocial = 1 };

std::string_view stream_name(Stream s);
std::optional<Stream> parse_stream(std::string_view s);

// Bad user input: malformed files, unknown ids, out-of-range arguments.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid command-line usage.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Runs fn(i) for i in [0, n) on up to `workers` threads. Each index is
// visited exactly once; callers write only to slot i, so results do not
// depend on the worker count.
void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace emerge

#endif  // EMERGE_COMMON_H_
