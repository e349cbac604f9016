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

#ifndef SALVKIT_VERIFIER_HPP
#define SALVKIT_VERIFIER_HPP

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "salvkit/simulator.hpp"
#include "salvkit/source.hpp"
#include "salvkit/timing.hpp"

namespace salv {

struct SignalVerdict {
  std::string signal;
  bool correct = false;
  std::optional<int> first_mismatch_cycle;
};

enum class CandidateStatus { Simulated, InterfaceMismatch, ParseError, SimError };

const char* candidate_status_name(CandidateStatus status);
std::optional<CandidateStatus> candidate_status_from_name(const std::string& name);

// Per-candidate differential result: one verdict per reference output signal.
// correct_set collects the signals whose traces match the reference on every
// cycle. Any status other than Simulated means empty correct_set and all
// verdicts incorrect.
struct CandidateReport {
  int candidate_id = 0;
  CandidateStatus status = CandidateStatus::ParseError;
  std::vector<SignalVerdict> verdicts;
  std::set<std::string> correct_set;
  std::string detail;  // human-readable failure note; not serialized
};

// Reference prepared once per prompt and shared across candidates. The AST
// lives behind a stable pointer because SimInstance borrows it.
struct ReferenceContext {
  SourceText src;
  std::unique_ptr<ModuleAst> ast;
  SimInstance inst;
  StimulusSet stimuli;
  SimTrace trace;
  std::vector<std::string> outputs;
};

// Parses, elaborates, and simulates the reference; builds the shared
// stimulus set (random by default, exhaustive over the data inputs when
// `exhaustive`). Any reference-side failure throws Error(ReferenceInvalid).
// `times`, when given, accumulates parse/simulate samples.
ReferenceContext prepare_reference(const SourceText& reference, int n,
                                   std::uint64_t seed, bool exhaustive = false,
                                   StageTimes* times = nullptr);

// Differential verdict for one candidate against a prepared reference.
// Candidate-side failures are absorbed into the report status:
// frontend rejections -> ParseError, interface differences (port names,
// directions, or widths; order-insensitive) -> InterfaceMismatch,
// elaborate/run failures -> SimError.
CandidateReport verify_candidate(const ReferenceContext& ref,
                                 const SourceText& candidate, int candidate_id,
                                 StageTimes* times = nullptr);

// All candidates of one prompt against the same stimulus set, reports in
// candidate order.
std::vector<CandidateReport> verify_prompt(const SourceText& reference,
                                           const std::vector<SourceText>& candidates,
                                           int n, std::uint64_t seed,
                                           bool exhaustive = false,
                                           StageTimes* times = nullptr);

}  // namespace salv

#endif  // SALVKIT_VERIFIER_HPP
