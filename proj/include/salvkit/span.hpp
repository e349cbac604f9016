// Copyright 2026 The salvkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SALVKIT_SPAN_HPP
#define SALVKIT_SPAN_HPP

#include <cstddef>
#include <string_view>

namespace salv {

// Half-open byte range [start, end) into a normalized source text.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool empty() const { return start == end; }
  bool contains(std::size_t offset) const { return offset >= start && offset < end; }
  bool contains(const Span& other) const { return other.start >= start && other.end <= end; }
  bool overlaps(const Span& other) const { return start < other.end && other.start < end; }

  friend bool operator==(const Span& a, const Span& b) {
    return a.start == b.start && a.end == b.end;
  }
  friend bool operator<(const Span& a, const Span& b) {
    return a.start != b.start ? a.start < b.start : a.end < b.end;
  }
};

inline std::string_view span_text(std::string_view text, const Span& s) {
  return text.substr(s.start, s.end - s.start);
}

}  // namespace salv

#endif  // SALVKIT_SPAN_HPP
