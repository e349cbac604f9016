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

#ifndef SALVKIT_TESTS_TEST_UTIL_HPP
#define SALVKIT_TESTS_TEST_UTIL_HPP

#include <algorithm>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "salvkit/parser.hpp"
#include "salvkit/simulator.hpp"
#include "salvkit/stimulus.hpp"

namespace salv::testing {

inline ModuleAst parse_text(const std::string& text,
                            const std::string& origin = "test.v") {
  return parse_module(normalize_source(text, origin));
}

// Stimulus set with explicit data columns; n taken from the first column.
inline StimulusSet columns_stimuli(
    const std::map<std::string, std::vector<std::uint64_t>>& columns) {
  StimulusSet set;
  set.n = columns.empty() ? 0 : static_cast<int>(columns.begin()->second.size());
  for (const auto& [name, col] : columns) {
    set.columns[name] = col;
    PortClass pc;
    pc.signal = name;
    pc.role = PortRole::Data;
    set.classes.push_back(pc);
  }
  return set;
}

inline SimTrace sim_text(const std::string& text, const StimulusSet& stimuli) {
  ModuleAst ast = parse_text(text);
  SimInstance inst = elaborate(ast);
  return run(inst, stimuli);
}

inline std::string trimmed(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\n");
  std::size_t e = s.find_last_not_of(" \t\n");
  if (b == std::string_view::npos) return "";
  return std::string(s.substr(b, e - b + 1));
}

inline void collect_assign_texts(const std::vector<StmtPtr>& stmts,
                                 const std::string& text,
                                 std::vector<std::string>& out) {
  for (const auto& s : stmts) {
    switch (s->kind) {
      case Stmt::Kind::Blocking:
      case Stmt::Kind::Nonblocking:
        out.push_back(trimmed(span_text(text, s->span)));
        break;
      case Stmt::Kind::If:
        collect_assign_texts(s->then_body, text, out);
        collect_assign_texts(s->else_body, text, out);
        break;
      case Stmt::Kind::Case:
        for (const auto& arm : s->arms) {
          collect_assign_texts(arm.body, text, out);
        }
        break;
    }
  }
}

// Sorted list of every assignment statement's trimmed text (continuous
// assigns, declaration initializers, procedural assigns); the slice
// idempotence comparison key.
inline std::vector<std::string> assignment_texts(const ModuleAst& ast) {
  std::vector<std::string> out;
  for (const auto& d : ast.decls) {
    if (d.init) out.push_back(trimmed(span_text(ast.src.text, d.span)));
  }
  for (const auto& item : ast.items) {
    if (const auto* ca = std::get_if<ContinuousAssign>(&item)) {
      out.push_back(trimmed(span_text(ast.src.text, ca->span)));
    } else if (const auto* blk = std::get_if<AlwaysBlock>(&item)) {
      collect_assign_texts(blk->body, ast.src.text, out);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace salv::testing

#endif  // SALVKIT_TESTS_TEST_UTIL_HPP
