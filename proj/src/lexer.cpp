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

#include "salvkit/lexer.hpp"

#include <array>
#include <cctype>

#include "salvkit/diagnostics.hpp"

namespace salv {

namespace {

[[noreturn]] void fail(const SourceText& src, std::size_t offset, DiagCode code,
                       std::string message) {
  LineCol lc = line_col_at(src.text, offset);
  throw Error(error_kind_for(code),
              Diagnostic{code, src.origin, lc.line, lc.col, std::move(message)});
}

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool base_char(char c) {
  switch (c) {
    case 'b': case 'B': case 'd': case 'D':
    case 'o': case 'O': case 'h': case 'H':
      return true;
    default:
      return false;
  }
}

bool based_digit(char c) {
  return std::isxdigit(static_cast<unsigned char>(c)) || c == '_' ||
         c == 'x' || c == 'X' || c == 'z' || c == 'Z' || c == '?';
}

// Multi-character operators, longest first. The three-character SystemVerilog
// forms are lexed so the parser can reject them by name instead of
// misparsing them as two tokens.
constexpr std::array<std::string_view, 12> kMultiOps = {
    "===", "!==", "<<<", ">>>", "<=", ">=", "==", "!=", "<<", ">>", "&&", "||"};

constexpr std::string_view kSingleOps = "~&|^+-*/%()[]{},;:?!<>=@#.";

}  // namespace

std::vector<Token> tokenize(const SourceText& src) {
  const std::string& s = src.text;
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = s.size();

  auto push = [&](Token::Kind kind, std::size_t start, std::size_t end) {
    tokens.push_back(Token{kind, std::string_view(s).substr(start, end - start),
                           start, end});
  };

  while (i < n) {
    char c = s[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\f' || c == '\v') {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && s[i + 1] == '/') {
      while (i < n && s[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && s[i + 1] == '*') {
      std::size_t start = i;
      i += 2;
      while (i + 1 < n && !(s[i] == '*' && s[i + 1] == '/')) ++i;
      if (i + 1 >= n) {
        fail(src, start, DiagCode::SyntaxError, "unterminated block comment");
      }
      i += 2;
      continue;
    }
    if (c == '`') {
      fail(src, i, DiagCode::UnsupportedConstruct,
           "preprocessor directive (no preprocessor support)");
    }
    if (c == '\\') {
      fail(src, i, DiagCode::UnsupportedConstruct, "escaped identifier");
    }
    if (c == '"') {
      std::size_t start = i++;
      while (i < n && s[i] != '"') {
        if (s[i] == '\\' && i + 1 < n) ++i;
        ++i;
      }
      if (i >= n) fail(src, start, DiagCode::SyntaxError, "unterminated string");
      ++i;
      push(Token::Kind::String, start, i);
      continue;
    }
    if (c == '$') {
      std::size_t start = i++;
      while (i < n && ident_char(s[i])) ++i;
      push(Token::Kind::SysName, start, i);
      continue;
    }
    if (ident_start(c)) {
      std::size_t start = i;
      while (i < n && ident_char(s[i])) ++i;
      push(Token::Kind::Ident, start, i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = i;
      while (i < n && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '_'))
        ++i;
      push(Token::Kind::Number, start, i);
      continue;
    }
    if (c == '\'') {
      std::size_t start = i++;
      if (i < n && (s[i] == 's' || s[i] == 'S')) {
        fail(src, start, DiagCode::UnsupportedConstruct, "signed literal");
      }
      if (i >= n || !base_char(s[i])) {
        fail(src, start, DiagCode::SyntaxError, "malformed based literal");
      }
      ++i;  // base character
      std::size_t digits_start = i;
      while (i < n && based_digit(s[i])) ++i;
      if (i == digits_start) {
        fail(src, start, DiagCode::SyntaxError, "based literal has no digits");
      }
      push(Token::Kind::Based, start, i);
      continue;
    }
    bool matched = false;
    for (std::string_view op : kMultiOps) {
      if (s.compare(i, op.size(), op) == 0) {
        push(Token::Kind::Punct, i, i + op.size());
        i += op.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (kSingleOps.find(c) != std::string_view::npos) {
      push(Token::Kind::Punct, i, i + 1);
      ++i;
      continue;
    }
    fail(src, i, DiagCode::SyntaxError,
         std::string("unexpected character '") + c + "'");
  }

  tokens.push_back(Token{Token::Kind::Eof, std::string_view(), n, n});
  return tokens;
}

}  // namespace salv
