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

#ifndef SALVKIT_SIGGRAPH_HPP
#define SALVKIT_SIGGRAPH_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "salvkit/ast.hpp"

namespace salv {

enum class DepKind { Data, Control };

// Directed dependency graph over a module's signals. An edge a -> b exists
// iff computing b reads a:
//   data    — a appears in the right-hand side of an assignment to b;
//   control — a appears in the condition of an if/case/ternary guarding an
//             assignment to b, or a is an edge (clock/reset) signal in the
//             sensitivity list of an always block that assigns b.
struct SignalGraph {
  std::vector<std::string> nodes;  // declaration order: ports, then nets
  std::map<std::string, int> width;
  // to -> {(from, kind)}
  std::map<std::string, std::set<std::pair<std::string, DepKind>>> preds;
  std::map<std::string, std::vector<Span>> def_sites;
  std::map<std::string, Span> decl_sites;

  bool has_node(const std::string& name) const {
    return width.count(name) > 0;
  }
  bool has_edge(const std::string& from, const std::string& to,
                DepKind kind) const {
    auto it = preds.find(to);
    return it != preds.end() && it->second.count({from, kind}) > 0;
  }
  bool has_edge(const std::string& from, const std::string& to) const {
    return has_edge(from, to, DepKind::Data) ||
           has_edge(from, to, DepKind::Control);
  }
};

// Requires a module that passed supported_subset_check.
SignalGraph build_graph(const ModuleAst& ast);

// Smallest superset of `targets` closed under predecessor edges of both
// kinds; includes the targets. Throws Error(UnknownSignal) for targets that
// are not graph nodes.
std::set<std::string> backward_closure(const SignalGraph& graph,
                                       const std::set<std::string>& targets);

// Standalone implementation of a target signal set, as retained byte spans
// plus reconstructed source.
struct SignalSlice {
  std::set<std::string> targets;
  std::set<std::string> kept_signals;  // backward closure
  std::vector<Span> spans;             // sorted, non-overlapping; [0] is the header
  std::vector<Span> body_spans;        // spans restricted to the module body
  std::string text;                    // parses under parse_module
};

// Keeps the statements, declarations, and guard structure the targets
// transitively depend on; everything else is dropped. Targets must be output
// ports. Throws Error(UnknownSignal) for bad targets and
// Error(SliceNotCompilable) if the reconstruction fails to re-parse (an
// internal bug, never expected).
SignalSlice extract_slice(const ModuleAst& ast, const SignalGraph& graph,
                          const std::set<std::string>& targets);

}  // namespace salv

#endif  // SALVKIT_SIGGRAPH_HPP
