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

#ifndef SALVKIT_DIAGNOSTICS_HPP
#define SALVKIT_DIAGNOSTICS_HPP

#include <optional>
#include <stdexcept>
#include <string>

namespace salv {

// Stable diagnostic codes for the frontend surface. The numeric suffix is
// part of the output contract (E001..E005) and must not be reassigned.
enum class DiagCode {
  SyntaxError = 1,           // E001
  UnsupportedConstruct = 2,  // E002
  UnresolvedIdentifier = 3,  // E003
  WidthOverflow = 4,         // E004
  MultipleModules = 5,       // E005
};

const char* diag_code_label(DiagCode code);

struct Diagnostic {
  DiagCode code = DiagCode::SyntaxError;
  std::string origin;
  int line = 0;  // 1-based
  int col = 0;   // 1-based
  std::string message;

  // "origin:line:col: Exxx: message"
  std::string format() const;
};

// Failure categories across the toolkit. Frontend kinds mirror DiagCode;
// the rest name the error values of the other modules.
enum class ErrorKind {
  InvalidEncoding,
  SyntaxError,
  UnsupportedConstruct,
  UnresolvedIdentifier,
  WidthOverflow,
  MultipleModules,
  CombinationalLoop,
  MultipleClocks,
  UnsettledLogic,
  StimulusMismatch,
  UnknownSignal,
  SliceNotCompilable,
  ReferenceInvalid,
  LengthMismatch,
  EmptyMask,
  DomainError,
  SinkFailure,
  ConfigError,
  CorpusLayoutError,
};

const char* error_kind_name(ErrorKind kind);

// The ErrorKind that carries a given frontend diagnostic code.
ErrorKind error_kind_for(DiagCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}
  Error(ErrorKind kind, Diagnostic diag)
      : std::runtime_error(diag.format()), kind_(kind), diag_(std::move(diag)) {}

  ErrorKind kind() const { return kind_; }
  const std::optional<Diagnostic>& diagnostic() const { return diag_; }

 private:
  ErrorKind kind_;
  std::optional<Diagnostic> diag_;
};

}  // namespace salv

#endif  // SALVKIT_DIAGNOSTICS_HPP
