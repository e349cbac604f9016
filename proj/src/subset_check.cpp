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

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <variant>

#include "salvkit/parser.hpp"

namespace salv {

namespace {

std::uint64_t width_mask(int bits) {
  return bits >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << bits) - 1);
}

class SubsetChecker {
 public:
  explicit SubsetChecker(const ModuleAst& ast) : ast_(ast) {}

  std::vector<Diagnostic> run() {
    diags_ = ast_.tolerated;
    for (const auto& item : ast_.items) {
      if (const auto* u = std::get_if<UnsupportedItem>(&item)) {
        report(u->span, "unsupported construct: " + u->construct);
      } else if (const auto* ca = std::get_if<ContinuousAssign>(&item)) {
        check_continuous(*ca);
      } else if (const auto* blk = std::get_if<AlwaysBlock>(&item)) {
        check_always(*blk);
      }
    }
    for (const auto& d : ast_.decls) {
      if (d.init) {
        ++current_item_;
        record_driver(d.sig_index, width_mask(d.width()), d.span,
                      /*procedural=*/false);
        check_expr(*d.init, /*casez_label=*/false);
      }
    }
    check_drivers();
    std::sort(diags_.begin(), diags_.end(), [](const auto& a, const auto& b) {
      return a.line != b.line ? a.line < b.line : a.col < b.col;
    });
    return diags_;
  }

 private:
  void report(Span span, std::string message) {
    LineCol lc = line_col_at(ast_.src.text, span.start);
    diags_.push_back(Diagnostic{DiagCode::UnsupportedConstruct, ast_.src.origin,
                                lc.line, lc.col, std::move(message)});
  }

  std::uint64_t lvalue_bits(const LValue& lv) const {
    if (lv.has_select()) {
      return width_mask(lv.val_high - lv.val_low + 1) << lv.val_low;
    }
    return width_mask(ast_.signals[lv.sig_index].width);
  }

  void record_driver(int sig, std::uint64_t bits, Span span, bool procedural) {
    drivers_.push_back({sig, bits, span, procedural, current_item_});
  }

  void check_assign_target(const LValue& lv, Span span, bool procedural,
                           bool edge_context) {
    const SignalInfo& sig = ast_.signals[lv.sig_index];
    if (sig.is_port && sig.dir == Direction::Input) {
      report(span, "assignment to input port '" + lv.name + "'");
    }
    if (procedural && sig.kind == NetKind::Wire) {
      report(span, "procedural assignment to wire '" + lv.name + "'");
    }
    if (!procedural && sig.kind == NetKind::Reg) {
      report(span, "continuous assignment to reg '" + lv.name + "'");
    }
    record_driver(lv.sig_index, lvalue_bits(lv), span, procedural);
    (void)edge_context;
  }

  void check_continuous(const ContinuousAssign& ca) {
    ++current_item_;
    check_assign_target(ca.lhs, ca.span, /*procedural=*/false,
                        /*edge_context=*/false);
    check_expr(*ca.rhs, false);
  }

  void check_expr(const Expr& e, bool casez_label) {
    if (e.kind == Expr::Kind::Number && e.wildcard != 0 && !casez_label) {
      report(e.span, "wildcard literal outside casez label");
    }
    for (const auto& arg : e.args) check_expr(*arg, false);
  }

  void collect_reads(const Expr& e, std::set<std::string>& reads) const {
    if ((e.kind == Expr::Kind::Ident && !e.is_const_ref) ||
        e.kind == Expr::Kind::Select) {
      reads.insert(e.name);
    }
    for (const auto& arg : e.args) collect_reads(*arg, reads);
  }

  void collect_stmt_reads(const Stmt& s, std::set<std::string>& reads) const {
    switch (s.kind) {
      case Stmt::Kind::Blocking:
      case Stmt::Kind::Nonblocking:
        collect_reads(*s.rhs, reads);
        return;
      case Stmt::Kind::If:
        collect_reads(*s.cond, reads);
        for (const auto& st : s.then_body) collect_stmt_reads(*st, reads);
        for (const auto& st : s.else_body) collect_stmt_reads(*st, reads);
        return;
      case Stmt::Kind::Case:
        collect_reads(*s.case_expr, reads);
        for (const auto& arm : s.arms) {
          for (const auto& st : arm.body) collect_stmt_reads(*st, reads);
        }
        return;
    }
  }

  void check_stmt(const Stmt& s, bool in_edge_block, bool in_casez) {
    switch (s.kind) {
      case Stmt::Kind::Blocking:
      case Stmt::Kind::Nonblocking:
        check_assign_target(s.lhs, s.span, /*procedural=*/true, in_edge_block);
        check_expr(*s.rhs, false);
        return;
      case Stmt::Kind::If:
        check_expr(*s.cond, false);
        for (const auto& st : s.then_body) check_stmt(*st, in_edge_block, false);
        for (const auto& st : s.else_body) check_stmt(*st, in_edge_block, false);
        return;
      case Stmt::Kind::Case: {
        check_expr(*s.case_expr, false);
        bool seen_default = false;
        for (const auto& arm : s.arms) {
          if (arm.is_default) {
            if (seen_default) report(arm.span, "multiple default arms in case");
            seen_default = true;
          }
          for (const auto& label : arm.labels) {
            std::set<std::string> label_reads;
            collect_reads(*label, label_reads);
            if (!label_reads.empty()) {
              report(label->span, "non-constant case label");
            }
            if (label->kind == Expr::Kind::Number && label->wildcard != 0 &&
                !s.is_casez) {
              report(label->span, "wildcard bits in plain case label");
            }
            check_expr(*label, s.is_casez);
          }
          for (const auto& st : arm.body) check_stmt(*st, in_edge_block, false);
        }
        return;
      }
    }
    (void)in_casez;
  }

  void check_always(const AlwaysBlock& blk) {
    ++current_item_;
    bool has_edge = false;
    bool has_level = false;
    std::set<std::string> edge_signals;
    for (const auto& sens : blk.sens) {
      if (sens.edge == EdgeKind::Level) {
        has_level = true;
      } else {
        has_edge = true;
        edge_signals.insert(sens.signal);
      }
    }

    if (has_edge && has_level) {
      report(blk.sens_span, "mixed edge and level sensitivity");
    }
    if (has_edge) {
      if (edge_signals.size() > 2) {
        report(blk.sens_span, "more than two edge-sensitive signals");
      }
      for (const auto& name : edge_signals) {
        const SignalInfo* sig = ast_.find_signal(name);
        if (sig == nullptr) continue;  // resolution already failed
        if (!sig->is_port || sig->dir != Direction::Input) {
          report(blk.sens_span,
                 "edge sensitivity on non-input signal '" + name + "' (derived clock)");
        } else if (sig->width != 1) {
          report(blk.sens_span,
                 "edge sensitivity on multi-bit signal '" + name + "'");
        }
      }
    } else if (!blk.star) {
      // Explicit level-sensitive list must cover every signal the block reads.
      std::set<std::string> reads;
      for (const auto& st : blk.body) collect_stmt_reads(*st, reads);
      std::set<std::string> listed;
      for (const auto& sens : blk.sens) listed.insert(sens.signal);
      for (const auto& r : reads) {
        if (!listed.count(r)) {
          report(blk.sens_span, "incomplete sensitivity list: missing '" + r + "'");
        }
      }
    }

    for (const auto& st : blk.body) check_stmt(*st, has_edge, false);
  }

  void check_drivers() {
    // Static multi-driver analysis: bit masks per top-level item; overlap
    // across items is outside the subset (no resolution in two-state logic).
    std::map<int, std::vector<std::size_t>> by_signal;
    for (std::size_t i = 0; i < drivers_.size(); ++i) {
      by_signal[drivers_[i].sig].push_back(i);
    }
    for (const auto& [sig, idxs] : by_signal) {
      for (std::size_t a = 0; a < idxs.size(); ++a) {
        for (std::size_t b = a + 1; b < idxs.size(); ++b) {
          const Driver& da = drivers_[idxs[a]];
          const Driver& db = drivers_[idxs[b]];
          if (da.item == db.item) continue;  // sequential order within a block
          if ((da.bits & db.bits) != 0) {
            report(db.span, "multiple drivers for signal '" +
                                ast_.signals[sig].name + "'");
            goto next_signal;
          }
        }
      }
    next_signal:;
    }
  }

  struct Driver {
    int sig;
    std::uint64_t bits;
    Span span;
    bool procedural;
    int item;
  };

  const ModuleAst& ast_;
  std::vector<Diagnostic> diags_;
  std::vector<Driver> drivers_;
  int current_item_ = -1;
};

}  // namespace

std::vector<Diagnostic> supported_subset_check(const ModuleAst& ast) {
  return SubsetChecker(ast).run();
}

}  // namespace salv
