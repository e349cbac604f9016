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

#ifndef SALVKIT_LEXER_HPP
#define SALVKIT_LEXER_HPP

#include <string_view>
#include <vector>

#include "salvkit/source.hpp"
#include "salvkit/span.hpp"

namespace salv {

struct Token {
  enum class Kind { Ident, Number, Based, String, SysName, Punct, Eof };

  Kind kind = Kind::Eof;
  std::string_view text;
  std::size_t start = 0;
  std::size_t end = 0;

  Span span() const { return Span{start, end}; }
  bool is(std::string_view s) const { return text == s; }
};

// Tokenizes normalized source. Comments and whitespace are skipped but their
// positions survive through token offsets. Throws Error on characters the
// toolkit cannot tokenize (preprocessor ticks, escaped identifiers, stray
// bytes), with E-coded diagnostics carrying line/column.
std::vector<Token> tokenize(const SourceText& src);

}  // namespace salv

#endif  // SALVKIT_LEXER_HPP
