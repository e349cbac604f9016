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

#ifndef SALVKIT_SIMULATOR_HPP
#define SALVKIT_SIMULATOR_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "salvkit/ast.hpp"
#include "salvkit/stimulus.hpp"

namespace salv {

// Per-cycle values of every output port; length n for every signal.
struct SimTrace {
  int cycles = 0;
  std::map<std::string, std::vector<std::uint64_t>> outputs;
};

struct ResetInfo {
  std::string signal;
  bool active_low = false;
  bool async = false;  // appears as an edge in some sensitivity list
};

struct ElaborateOptions {
  // When false, a comb dependency cycle raises CombinationalLoop at
  // elaborate time instead of relying on fixpoint settling.
  bool allow_comb_cycles = true;
};

// A module prepared for cycle-based two-state simulation: combinational
// items scheduled (topological order when one exists, fixpoint otherwise),
// edge-triggered blocks collected, clock/reset identified from the header
// classification. The instance borrows the ModuleAst, which must outlive it.
struct SimInstance {
  const ModuleAst* ast = nullptr;

  struct CombUnit {
    enum class Kind { Assign, Always, DeclInit };
    Kind kind = Kind::Assign;
    const ContinuousAssign* assign = nullptr;
    const AlwaysBlock* always = nullptr;
    const NetDecl* decl = nullptr;
    std::vector<int> reads;
    std::vector<int> writes;
  };

  std::vector<CombUnit> comb;
  std::vector<int> comb_order;  // execution order over `comb`
  bool comb_cyclic = false;     // no topological order; settle iteratively

  std::vector<const AlwaysBlock*> edge_blocks;
  std::vector<bool> is_reg;  // per signal index

  std::vector<PortClass> classes;
  std::optional<std::string> clock;
  std::optional<ResetInfo> reset;
};

// Requires supported_subset_check(ast) to be empty; throws
// Error(UnsupportedConstruct) otherwise. Throws Error(MultipleClocks) when
// edge-triggered blocks use more than one distinct non-reset edge signal and
// Error(CombinationalLoop) per ElaborateOptions.
SimInstance elaborate(const ModuleAst& ast, const ElaborateOptions& opts = {});

// One cycle per stimulus vector: apply inputs, settle combinational logic to
// fixpoint (at most 64 sweeps), sample all outputs, then perform one clock
// edge with nonblocking updates applied atomically. Outputs are sampled
// post-settle, pre-edge. Registers start at zero. Throws
// Error(UnsettledLogic) and Error(StimulusMismatch).
SimTrace run(const SimInstance& inst, const StimulusSet& stimuli);

}  // namespace salv

#endif  // SALVKIT_SIMULATOR_HPP
