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

#include "salvkit/verifier.hpp"

#include <algorithm>
#include <map>

#include "salvkit/parser.hpp"

namespace salv {

const char* candidate_status_name(CandidateStatus status) {
  switch (status) {
    case CandidateStatus::Simulated: return "simulated";
    case CandidateStatus::InterfaceMismatch: return "interface_mismatch";
    case CandidateStatus::ParseError: return "parse_error";
    case CandidateStatus::SimError: return "sim_error";
  }
  return "unknown";
}

std::optional<CandidateStatus> candidate_status_from_name(const std::string& name) {
  if (name == "simulated") return CandidateStatus::Simulated;
  if (name == "interface_mismatch") return CandidateStatus::InterfaceMismatch;
  if (name == "parse_error") return CandidateStatus::ParseError;
  if (name == "sim_error") return CandidateStatus::SimError;
  return std::nullopt;
}

namespace {

struct PortShape {
  Direction dir;
  int width;
  bool operator==(const PortShape& other) const {
    return dir == other.dir && width == other.width;
  }
};

std::map<std::string, PortShape> port_shapes(const ModuleAst& ast) {
  std::map<std::string, PortShape> out;
  for (const auto& p : ast.ports) {
    out[p.name] = PortShape{p.dir, p.width()};
  }
  return out;
}

CandidateReport failed_report(const ReferenceContext& ref, int candidate_id,
                              CandidateStatus status, std::string detail) {
  CandidateReport report;
  report.candidate_id = candidate_id;
  report.status = status;
  report.detail = std::move(detail);
  for (const auto& name : ref.outputs) {
    report.verdicts.push_back(SignalVerdict{name, false, std::nullopt});
  }
  return report;
}

}  // namespace

ReferenceContext prepare_reference(const SourceText& reference, int n,
                                   std::uint64_t seed, bool exhaustive,
                                   StageTimes* times) {
  try {
    ReferenceContext ctx;
    ctx.src = reference;
    {
      ScopedStage t(times ? &times->parse : nullptr);
      ctx.ast = std::make_unique<ModuleAst>(parse_module(reference));
    }
    ctx.inst = elaborate(*ctx.ast);
    ctx.stimuli = exhaustive ? exhaustive_stimuli(ctx.inst.classes)
                             : generate_stimuli(ctx.inst.classes, n, seed);
    {
      ScopedStage t(times ? &times->simulate : nullptr);
      ctx.trace = run(ctx.inst, ctx.stimuli);
    }
    ctx.outputs = ctx.ast->output_names();
    return ctx;
  } catch (const Error& e) {
    throw Error(ErrorKind::ReferenceInvalid,
                "reference module invalid: " + std::string(e.what()));
  }
}

CandidateReport verify_candidate(const ReferenceContext& ref,
                                 const SourceText& candidate, int candidate_id,
                                 StageTimes* times) {
  ModuleAst ast;
  try {
    ScopedStage t(times ? &times->parse : nullptr);
    ast = parse_module(candidate);
    std::vector<Diagnostic> diags = supported_subset_check(ast);
    if (!diags.empty()) {
      return failed_report(ref, candidate_id, CandidateStatus::ParseError,
                           diags.front().format());
    }
  } catch (const Error& e) {
    return failed_report(ref, candidate_id, CandidateStatus::ParseError, e.what());
  }

  if (port_shapes(ast) != port_shapes(*ref.ast)) {
    return failed_report(ref, candidate_id, CandidateStatus::InterfaceMismatch,
                         "port list differs from reference");
  }

  SimTrace cand_trace;
  try {
    ScopedStage t(times ? &times->simulate : nullptr);
    SimInstance inst = elaborate(ast);
    cand_trace = run(inst, ref.stimuli);
  } catch (const Error& e) {
    return failed_report(ref, candidate_id, CandidateStatus::SimError, e.what());
  } catch (const std::exception& e) {
    // Crash isolation: anything unexpected from one candidate must not take
    // down the prompt.
    return failed_report(ref, candidate_id, CandidateStatus::SimError, e.what());
  }

  ScopedStage t(times ? &times->compare : nullptr);
  CandidateReport report;
  report.candidate_id = candidate_id;
  report.status = CandidateStatus::Simulated;
  for (const auto& name : ref.outputs) {
    const auto& ref_col = ref.trace.outputs.at(name);
    const auto& cand_col = cand_trace.outputs.at(name);
    SignalVerdict verdict;
    verdict.signal = name;
    verdict.correct = true;
    for (std::size_t cycle = 0; cycle < ref_col.size(); ++cycle) {
      if (ref_col[cycle] != cand_col[cycle]) {
        verdict.correct = false;
        verdict.first_mismatch_cycle = static_cast<int>(cycle);
        break;
      }
    }
    if (verdict.correct) report.correct_set.insert(name);
    report.verdicts.push_back(std::move(verdict));
  }
  return report;
}

std::vector<CandidateReport> verify_prompt(const SourceText& reference,
                                           const std::vector<SourceText>& candidates,
                                           int n, std::uint64_t seed,
                                           bool exhaustive, StageTimes* times) {
  ReferenceContext ref = prepare_reference(reference, n, seed, exhaustive, times);
  std::vector<CandidateReport> reports;
  reports.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    reports.push_back(
        verify_candidate(ref, candidates[i], static_cast<int>(i), times));
  }
  return reports;
}

}  // namespace salv
