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

#ifndef SALVKIT_SOURCE_HPP
#define SALVKIT_SOURCE_HPP

#include <string>
#include <string_view>

#include "salvkit/span.hpp"

namespace salv {

// UTF-8 source with line endings normalized to LF. Every Span produced
// anywhere in the toolkit indexes into `text`.
struct SourceText {
  std::string text;
  std::string origin = "<inline>";

  friend bool operator==(const SourceText& a, const SourceText& b) {
    return a.text == b.text;
  }
};

// CRLF and lone CR become LF; no other bytes are altered. Throws
// Error(InvalidEncoding) if `raw` is not valid UTF-8.
SourceText normalize_source(std::string_view raw, std::string origin = "<inline>");

// Reads a file and normalizes it. Throws Error(ConfigError) on I/O failure.
SourceText load_source(const std::string& path);

struct LineCol {
  int line = 1;
  int col = 1;
};

// 1-based line/column of a byte offset in normalized text.
LineCol line_col_at(std::string_view text, std::size_t offset);

}  // namespace salv

#endif  // SALVKIT_SOURCE_HPP
