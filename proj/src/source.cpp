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

#include "salvkit/source.hpp"

#include <fstream>
#include <sstream>

#include "salvkit/diagnostics.hpp"

namespace salv {

const char* diag_code_label(DiagCode code) {
  switch (code) {
    case DiagCode::SyntaxError: return "E001";
    case DiagCode::UnsupportedConstruct: return "E002";
    case DiagCode::UnresolvedIdentifier: return "E003";
    case DiagCode::WidthOverflow: return "E004";
    case DiagCode::MultipleModules: return "E005";
  }
  return "E???";
}

std::string Diagnostic::format() const {
  std::ostringstream os;
  os << origin << ":" << line << ":" << col << ": " << diag_code_label(code)
     << ": " << message;
  return os.str();
}

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidEncoding: return "InvalidEncoding";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnsupportedConstruct: return "UnsupportedConstruct";
    case ErrorKind::UnresolvedIdentifier: return "UnresolvedIdentifier";
    case ErrorKind::WidthOverflow: return "WidthOverflow";
    case ErrorKind::MultipleModules: return "MultipleModules";
    case ErrorKind::CombinationalLoop: return "CombinationalLoop";
    case ErrorKind::MultipleClocks: return "MultipleClocks";
    case ErrorKind::UnsettledLogic: return "UnsettledLogic";
    case ErrorKind::StimulusMismatch: return "StimulusMismatch";
    case ErrorKind::UnknownSignal: return "UnknownSignal";
    case ErrorKind::SliceNotCompilable: return "SliceNotCompilable";
    case ErrorKind::ReferenceInvalid: return "ReferenceInvalid";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::EmptyMask: return "EmptyMask";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::SinkFailure: return "SinkFailure";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::CorpusLayoutError: return "CorpusLayoutError";
  }
  return "Unknown";
}

ErrorKind error_kind_for(DiagCode code) {
  switch (code) {
    case DiagCode::SyntaxError: return ErrorKind::SyntaxError;
    case DiagCode::UnsupportedConstruct: return ErrorKind::UnsupportedConstruct;
    case DiagCode::UnresolvedIdentifier: return ErrorKind::UnresolvedIdentifier;
    case DiagCode::WidthOverflow: return ErrorKind::WidthOverflow;
    case DiagCode::MultipleModules: return ErrorKind::MultipleModules;
  }
  return ErrorKind::SyntaxError;
}

namespace {

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    std::size_t extra;
    if (c < 0x80) {
      extra = 0;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      if (c < 0xC2) return false;  // overlong
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      if (c > 0xF4) return false;
    } else {
      return false;
    }
    if (i + extra >= s.size() && extra > 0 && i + extra + 1 > s.size()) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      if (i + k >= s.size()) return false;
      if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return false;
    }
    i += extra + 1;
  }
  return true;
}

}  // namespace

SourceText normalize_source(std::string_view raw, std::string origin) {
  if (!valid_utf8(raw)) {
    throw Error(ErrorKind::InvalidEncoding,
                origin + ": input is not valid UTF-8");
  }
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    char c = raw[i];
    if (c == '\r') {
      out.push_back('\n');
      if (i + 1 < raw.size() && raw[i + 1] == '\n') ++i;
    } else {
      out.push_back(c);
    }
  }
  return SourceText{std::move(out), std::move(origin)};
}

SourceText load_source(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::ConfigError, "cannot open file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return normalize_source(buf.str(), path);
}

LineCol line_col_at(std::string_view text, std::size_t offset) {
  LineCol lc;
  if (offset > text.size()) offset = text.size();
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') {
      ++lc.line;
      lc.col = 1;
    } else {
      ++lc.col;
    }
  }
  return lc;
}

}  // namespace salv
