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

#include "salvkit/simulator.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <set>
#include <variant>

#include "salvkit/parser.hpp"

namespace salv {

namespace {

constexpr int kMaxSweeps = 64;

std::uint64_t mask_of(int width) {
  return width >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
}

void collect_read_indices(const Expr& e, std::set<int>& out) {
  if ((e.kind == Expr::Kind::Ident && !e.is_const_ref) ||
      e.kind == Expr::Kind::Select) {
    out.insert(e.sig_index);
    return;
  }
  for (const auto& arg : e.args) collect_read_indices(*arg, out);
}

void collect_stmt_rw(const Stmt& s, std::set<int>& reads, std::set<int>& writes) {
  switch (s.kind) {
    case Stmt::Kind::Blocking:
    case Stmt::Kind::Nonblocking:
      writes.insert(s.lhs.sig_index);
      collect_read_indices(*s.rhs, reads);
      return;
    case Stmt::Kind::If:
      collect_read_indices(*s.cond, reads);
      for (const auto& st : s.then_body) collect_stmt_rw(*st, reads, writes);
      for (const auto& st : s.else_body) collect_stmt_rw(*st, reads, writes);
      return;
    case Stmt::Kind::Case:
      collect_read_indices(*s.case_expr, reads);
      for (const auto& arm : s.arms) {
        for (const auto& label : arm.labels) collect_read_indices(*label, reads);
        for (const auto& st : arm.body) collect_stmt_rw(*st, reads, writes);
      }
      return;
  }
}

bool block_has_edge(const AlwaysBlock& blk) {
  for (const auto& sens : blk.sens) {
    if (sens.edge != EdgeKind::Level) return true;
  }
  return false;
}

// Pending nonblocking update.
struct NbWrite {
  int sig;
  int high;  // -1 = whole signal
  int low;
  std::uint64_t value;
};

class Engine {
 public:
  Engine(const SimInstance& inst, const StimulusSet& stimuli)
      : inst_(inst), ast_(*inst.ast), stimuli_(stimuli) {}

  SimTrace execute() {
    check_stimuli();
    state_.assign(ast_.signals.size(), 0);

    SimTrace trace;
    trace.cycles = stimuli_.n;
    for (const auto& p : ast_.ports) {
      if (p.dir == Direction::Output) {
        trace.outputs[p.name].reserve(static_cast<std::size_t>(stimuli_.n));
      }
    }

    for (int cycle = 0; cycle < stimuli_.n; ++cycle) {
      apply_inputs(cycle);
      settle();
      for (const auto& p : ast_.ports) {
        if (p.dir == Direction::Output) {
          trace.outputs[p.name].push_back(state_[p.sig_index]);
        }
      }
      if (!inst_.edge_blocks.empty()) clock_edge();
    }
    return trace;
  }

 private:
  void check_stimuli() {
    std::set<std::string> expected;
    for (const auto& pc : inst_.classes) {
      if (pc.role == PortRole::Clock) {
        if (stimuli_.columns.count(pc.signal)) {
          throw Error(ErrorKind::StimulusMismatch,
                      "clock '" + pc.signal + "' must not have a column");
        }
        continue;
      }
      expected.insert(pc.signal);
      auto it = stimuli_.columns.find(pc.signal);
      if (it == stimuli_.columns.end()) {
        throw Error(ErrorKind::StimulusMismatch,
                    "missing stimulus column for input '" + pc.signal + "'");
      }
      if (static_cast<int>(it->second.size()) != stimuli_.n) {
        throw Error(ErrorKind::StimulusMismatch,
                    "column '" + pc.signal + "' has wrong length");
      }
      std::uint64_t mask = mask_of(pc.width);
      for (std::uint64_t v : it->second) {
        if ((v & ~mask) != 0) {
          throw Error(ErrorKind::StimulusMismatch,
                      "column '" + pc.signal + "' value exceeds port width");
        }
      }
    }
    for (const auto& [name, col] : stimuli_.columns) {
      (void)col;
      if (!expected.count(name)) {
        throw Error(ErrorKind::StimulusMismatch,
                    "column '" + name + "' does not match an input port");
      }
    }
  }

  void apply_inputs(int cycle) {
    for (const auto& pc : inst_.classes) {
      if (pc.role == PortRole::Clock) continue;
      int idx = ast_.signal_index(pc.signal);
      state_[idx] = stimuli_.columns.at(pc.signal)[cycle];
    }
  }

  // ---- evaluation -----------------------------------------------------

  std::uint64_t eval(const Expr& e) {
    const std::uint64_t m = mask_of(e.eval_width);
    switch (e.kind) {
      case Expr::Kind::Number:
        return e.value & m;
      case Expr::Kind::Ident:
        if (e.is_const_ref) return e.value & m;
        return state_[e.sig_index];
      case Expr::Kind::Select:
        return (state_[e.sig_index] >> e.val_low) &
               mask_of(e.val_high - e.val_low + 1);
      case Expr::Kind::Unary: {
        std::uint64_t a = eval(*e.args[0]);
        switch (e.uop) {
          case UnaryOp::BitNot: return ~a & m;
          case UnaryOp::Negate: return (0 - a) & m;
          case UnaryOp::LogicNot: return a == 0 ? 1 : 0;
          case UnaryOp::RedAnd:
            return a == mask_of(e.args[0]->eval_width) ? 1 : 0;
          case UnaryOp::RedOr: return a != 0 ? 1 : 0;
          case UnaryOp::RedXor:
            return static_cast<std::uint64_t>(std::popcount(a) & 1);
        }
        return 0;
      }
      case Expr::Kind::Binary: {
        std::uint64_t a = eval(*e.args[0]);
        std::uint64_t b = eval(*e.args[1]);
        switch (e.bop) {
          case BinaryOp::BitAnd: return a & b;
          case BinaryOp::BitOr: return a | b;
          case BinaryOp::BitXor: return a ^ b;
          case BinaryOp::Add: return (a + b) & m;
          case BinaryOp::Sub: return (a - b) & m;
          case BinaryOp::Mul: return (a * b) & m;
          case BinaryOp::Shl: return b >= 64 ? 0 : (a << b) & m;
          case BinaryOp::Shr: return b >= 64 ? 0 : a >> b;
          case BinaryOp::Eq: return a == b ? 1 : 0;
          case BinaryOp::Ne: return a != b ? 1 : 0;
          case BinaryOp::Lt: return a < b ? 1 : 0;
          case BinaryOp::Le: return a <= b ? 1 : 0;
          case BinaryOp::Gt: return a > b ? 1 : 0;
          case BinaryOp::Ge: return a >= b ? 1 : 0;
          case BinaryOp::LogicAnd: return (a != 0 && b != 0) ? 1 : 0;
          case BinaryOp::LogicOr: return (a != 0 || b != 0) ? 1 : 0;
        }
        return 0;
      }
      case Expr::Kind::Ternary:
        return eval(*e.args[0]) != 0 ? eval(*e.args[1]) : eval(*e.args[2]);
      case Expr::Kind::Concat: {
        std::uint64_t v = 0;
        for (const auto& arg : e.args) {
          v = (v << arg->self_width) | eval(*arg);
        }
        return v & m;
      }
      case Expr::Kind::Replicate: {
        std::uint64_t part = eval(*e.args[0]);
        int w = e.args[0]->self_width;
        std::uint64_t v = 0;
        for (std::uint64_t i = 0; i < e.rep_count; ++i) {
          v = (v << w) | part;
        }
        return v & m;
      }
    }
    return 0;
  }

  bool write_bits(int sig, int high, int low, std::uint64_t value) {
    std::uint64_t old = state_[sig];
    std::uint64_t next;
    if (high < 0) {
      next = value & mask_of(ast_.signals[sig].width);
    } else {
      std::uint64_t field = mask_of(high - low + 1);
      next = (old & ~(field << low)) | ((value & field) << low);
    }
    state_[sig] = next;
    return next != old;
  }

  bool assign_lvalue(const LValue& lv, std::uint64_t value) {
    if (lv.has_select()) {
      return write_bits(lv.sig_index, lv.val_high, lv.val_low, value);
    }
    return write_bits(lv.sig_index, -1, -1, value);
  }

  bool exec_stmt(const Stmt& s, std::vector<NbWrite>& nb) {
    switch (s.kind) {
      case Stmt::Kind::Blocking:
        return assign_lvalue(s.lhs, eval(*s.rhs));
      case Stmt::Kind::Nonblocking: {
        NbWrite w;
        w.sig = s.lhs.sig_index;
        w.high = s.lhs.has_select() ? s.lhs.val_high : -1;
        w.low = s.lhs.has_select() ? s.lhs.val_low : -1;
        w.value = eval(*s.rhs);
        nb.push_back(w);
        return false;
      }
      case Stmt::Kind::If: {
        bool changed = false;
        const auto& body = eval(*s.cond) != 0 ? s.then_body : s.else_body;
        for (const auto& st : body) changed |= exec_stmt(*st, nb);
        return changed;
      }
      case Stmt::Kind::Case: {
        std::uint64_t sel = eval(*s.case_expr);
        const CaseArm* chosen = nullptr;
        const CaseArm* fallback = nullptr;
        for (const auto& arm : s.arms) {
          if (arm.is_default) {
            if (fallback == nullptr) fallback = &arm;
            continue;
          }
          for (const auto& label : arm.labels) {
            std::uint64_t lv = eval(*label);
            std::uint64_t care = ~std::uint64_t{0};
            if (s.is_casez && label->kind == Expr::Kind::Number) {
              care = ~label->wildcard;
            }
            if (((sel ^ lv) & care) == 0) {
              chosen = &arm;
              break;
            }
          }
          if (chosen) break;
        }
        if (chosen == nullptr) chosen = fallback;
        if (chosen == nullptr) return false;
        bool changed = false;
        for (const auto& st : chosen->body) changed |= exec_stmt(*st, nb);
        return changed;
      }
    }
    return false;
  }

  bool apply_nb(const std::vector<NbWrite>& nb) {
    bool changed = false;
    for (const auto& w : nb) {
      changed |= write_bits(w.sig, w.high, w.low, w.value);
    }
    return changed;
  }

  bool exec_comb_unit(const SimInstance::CombUnit& unit) {
    switch (unit.kind) {
      case SimInstance::CombUnit::Kind::Assign:
        return assign_lvalue(unit.assign->lhs, eval(*unit.assign->rhs));
      case SimInstance::CombUnit::Kind::DeclInit:
        return write_bits(unit.decl->sig_index, -1, -1, eval(*unit.decl->init));
      case SimInstance::CombUnit::Kind::Always: {
        std::vector<NbWrite> nb;
        bool changed = false;
        for (const auto& st : unit.always->body) changed |= exec_stmt(*st, nb);
        changed |= apply_nb(nb);
        return changed;
      }
    }
    return false;
  }

  void settle() {
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
      bool changed = false;
      for (int idx : inst_.comb_order) {
        changed |= exec_comb_unit(inst_.comb[idx]);
      }
      if (!changed) return;
    }
    throw Error(ErrorKind::UnsettledLogic,
                "combinational logic did not settle within " +
                    std::to_string(kMaxSweeps) + " sweeps");
  }

  void clock_edge() {
    std::vector<NbWrite> nb;
    for (const AlwaysBlock* blk : inst_.edge_blocks) {
      for (const auto& st : blk->body) exec_stmt(*st, nb);
    }
    apply_nb(nb);
  }

  const SimInstance& inst_;
  const ModuleAst& ast_;
  const StimulusSet& stimuli_;
  std::vector<std::uint64_t> state_;
};

}  // namespace

SimInstance elaborate(const ModuleAst& ast, const ElaborateOptions& opts) {
  {
    std::vector<Diagnostic> diags = supported_subset_check(ast);
    if (!diags.empty()) {
      throw Error(ErrorKind::UnsupportedConstruct, diags.front());
    }
  }

  SimInstance inst;
  inst.ast = &ast;
  inst.classes = classify_ports(ast);
  inst.is_reg.assign(ast.signals.size(), false);

  std::string reset_name;
  for (const auto& pc : inst.classes) {
    if (pc.role == PortRole::Reset) reset_name = pc.signal;
    if (pc.role == PortRole::Clock) inst.clock = pc.signal;
  }

  bool reset_async = false;
  std::set<std::string> clock_candidates;
  for (const auto& item : ast.items) {
    const auto* blk = std::get_if<AlwaysBlock>(&item);
    if (blk == nullptr) continue;
    if (!block_has_edge(*blk)) continue;
    inst.edge_blocks.push_back(blk);
    for (const auto& sens : blk->sens) {
      if (sens.edge == EdgeKind::Level) continue;
      if (sens.signal == reset_name) {
        reset_async = true;
      } else {
        clock_candidates.insert(sens.signal);
      }
    }
    std::set<int> reads, writes;
    for (const auto& st : blk->body) collect_stmt_rw(*st, reads, writes);
    for (int w : writes) inst.is_reg[w] = true;
  }

  if (clock_candidates.size() > 1) {
    std::string names;
    for (const auto& n : clock_candidates) names += (names.empty() ? "" : ", ") + n;
    throw Error(ErrorKind::MultipleClocks,
                "edge-triggered blocks use multiple clocks: " + names);
  }
  if (!inst.edge_blocks.empty()) {
    if (clock_candidates.empty()) {
      throw Error(ErrorKind::UnsupportedConstruct,
                  "edge-triggered block without an identifiable clock");
    }
    if (!inst.clock || *inst.clock != *clock_candidates.begin()) {
      // Header classification and sensitivity usage must agree.
      inst.clock = *clock_candidates.begin();
    }
  }
  if (!reset_name.empty()) {
    ResetInfo info;
    info.signal = reset_name;
    for (const auto& pc : inst.classes) {
      if (pc.signal == reset_name) info.active_low = pc.active_low;
    }
    info.async = reset_async;
    inst.reset = info;
  }

  // Combinational units: declaration initializers, continuous assigns, and
  // level/star always blocks.
  for (const auto& d : ast.decls) {
    if (!d.init) continue;
    SimInstance::CombUnit unit;
    unit.kind = SimInstance::CombUnit::Kind::DeclInit;
    unit.decl = &d;
    std::set<int> reads;
    collect_read_indices(*d.init, reads);
    unit.reads.assign(reads.begin(), reads.end());
    unit.writes.push_back(d.sig_index);
    inst.comb.push_back(std::move(unit));
  }
  for (const auto& item : ast.items) {
    if (const auto* ca = std::get_if<ContinuousAssign>(&item)) {
      SimInstance::CombUnit unit;
      unit.kind = SimInstance::CombUnit::Kind::Assign;
      unit.assign = ca;
      std::set<int> reads;
      collect_read_indices(*ca->rhs, reads);
      unit.reads.assign(reads.begin(), reads.end());
      unit.writes.push_back(ca->lhs.sig_index);
      inst.comb.push_back(std::move(unit));
    } else if (const auto* blk = std::get_if<AlwaysBlock>(&item)) {
      if (block_has_edge(*blk)) continue;
      SimInstance::CombUnit unit;
      unit.kind = SimInstance::CombUnit::Kind::Always;
      unit.always = blk;
      std::set<int> reads, writes;
      for (const auto& st : blk->body) collect_stmt_rw(*st, reads, writes);
      unit.reads.assign(reads.begin(), reads.end());
      unit.writes.assign(writes.begin(), writes.end());
      inst.comb.push_back(std::move(unit));
    }
  }

  // Topological order over comb units (writer before reader). Kahn's
  // algorithm with stable tie-breaking on declaration order.
  const std::size_t n = inst.comb.size();
  std::map<int, std::vector<std::size_t>> writers;  // signal -> units
  for (std::size_t i = 0; i < n; ++i) {
    for (int w : inst.comb[i].writes) writers[w].push_back(i);
  }
  std::vector<std::set<std::size_t>> succs(n);
  std::vector<int> indegree(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (int r : inst.comb[i].reads) {
      auto it = writers.find(r);
      if (it == writers.end()) continue;
      for (std::size_t w : it->second) {
        if (w == i) continue;  // self-dependency settles iteratively
        if (succs[w].insert(i).second) ++indegree[i];
      }
    }
  }
  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::vector<int> order;
  while (!ready.empty()) {
    std::size_t i = ready.front();
    ready.pop_front();
    order.push_back(static_cast<int>(i));
    for (std::size_t s : succs[i]) {
      if (--indegree[s] == 0) ready.push_back(s);
    }
  }
  if (order.size() == n) {
    inst.comb_order = order;
  } else {
    inst.comb_cyclic = true;
    if (!opts.allow_comb_cycles) {
      throw Error(ErrorKind::CombinationalLoop,
                  "combinational dependency cycle in module " + ast.name);
    }
    inst.comb_order.resize(n);
    for (std::size_t i = 0; i < n; ++i) inst.comb_order[i] = static_cast<int>(i);
  }

  return inst;
}

SimTrace run(const SimInstance& inst, const StimulusSet& stimuli) {
  Engine engine(inst, stimuli);
  return engine.execute();
}

}  // namespace salv
