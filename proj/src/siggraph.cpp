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

#include "salvkit/siggraph.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <sstream>
#include <variant>

#include "salvkit/parser.hpp"

namespace salv {

namespace {

// Collects signal names read by an expression. Names inside the condition of
// a ternary are guards and land in `control`; everything else is data. Once
// inside a condition, everything below it guards the result.
void collect_expr_deps(const Expr& e, bool as_control,
                       std::set<std::string>& data,
                       std::set<std::string>& control) {
  if ((e.kind == Expr::Kind::Ident && !e.is_const_ref) ||
      e.kind == Expr::Kind::Select) {
    (as_control ? control : data).insert(e.name);
    return;
  }
  if (e.kind == Expr::Kind::Ternary) {
    collect_expr_deps(*e.args[0], true, data, control);
    collect_expr_deps(*e.args[1], as_control, data, control);
    collect_expr_deps(*e.args[2], as_control, data, control);
    return;
  }
  for (const auto& arg : e.args) {
    collect_expr_deps(*arg, as_control, data, control);
  }
}

void collect_guard_names(const Expr& e, std::set<std::string>& out) {
  std::set<std::string> data, control;
  collect_expr_deps(e, true, data, control);
  out.insert(control.begin(), control.end());
}

class GraphBuilder {
 public:
  explicit GraphBuilder(const ModuleAst& ast) : ast_(ast) {}

  SignalGraph build() {
    for (const auto& sig : ast_.signals) {
      graph_.nodes.push_back(sig.name);
      graph_.width[sig.name] = sig.width;
    }
    for (const auto& p : ast_.ports) graph_.decl_sites[p.name] = p.span;
    for (const auto& d : ast_.decls) graph_.decl_sites[d.name] = d.span;

    for (const auto& d : ast_.decls) {
      if (d.init) add_assign(d.name, *d.init, {}, d.span);
    }
    for (const auto& item : ast_.items) {
      if (const auto* ca = std::get_if<ContinuousAssign>(&item)) {
        add_assign(ca->lhs.name, *ca->rhs, {}, ca->span);
      } else if (const auto* blk = std::get_if<AlwaysBlock>(&item)) {
        std::set<std::string> edge_guards;
        for (const auto& sens : blk->sens) {
          if (sens.edge != EdgeKind::Level) edge_guards.insert(sens.signal);
        }
        for (const auto& stmt : blk->body) {
          walk_stmt(*stmt, edge_guards);
        }
      }
    }
    return std::move(graph_);
  }

 private:
  void add_edge(const std::string& from, const std::string& to, DepKind kind) {
    graph_.preds[to].insert({from, kind});
  }

  void add_assign(const std::string& target, const Expr& rhs,
                  const std::set<std::string>& guards, Span stmt_span) {
    std::set<std::string> data, control;
    collect_expr_deps(rhs, false, data, control);
    for (const auto& d : data) add_edge(d, target, DepKind::Data);
    for (const auto& c : control) add_edge(c, target, DepKind::Control);
    for (const auto& g : guards) add_edge(g, target, DepKind::Control);
    graph_.def_sites[target].push_back(stmt_span);
  }

  void walk_stmt(const Stmt& s, std::set<std::string> guards) {
    switch (s.kind) {
      case Stmt::Kind::Blocking:
      case Stmt::Kind::Nonblocking:
        add_assign(s.lhs.name, *s.rhs, guards, s.span);
        return;
      case Stmt::Kind::If: {
        std::set<std::string> inner = guards;
        collect_guard_names(*s.cond, inner);
        for (const auto& st : s.then_body) walk_stmt(*st, inner);
        for (const auto& st : s.else_body) walk_stmt(*st, inner);
        return;
      }
      case Stmt::Kind::Case: {
        std::set<std::string> inner = guards;
        collect_guard_names(*s.case_expr, inner);
        for (const auto& arm : s.arms) {
          for (const auto& st : arm.body) walk_stmt(*st, inner);
        }
        return;
      }
    }
  }

  const ModuleAst& ast_;
  SignalGraph graph_;
};

}  // namespace

SignalGraph build_graph(const ModuleAst& ast) {
  return GraphBuilder(ast).build();
}

std::set<std::string> backward_closure(const SignalGraph& graph,
                                       const std::set<std::string>& targets) {
  for (const auto& t : targets) {
    if (!graph.has_node(t)) {
      throw Error(ErrorKind::UnknownSignal, "unknown signal '" + t + "'");
    }
  }
  std::set<std::string> closure = targets;
  std::deque<std::string> queue(targets.begin(), targets.end());
  while (!queue.empty()) {
    std::string cur = std::move(queue.front());
    queue.pop_front();
    auto it = graph.preds.find(cur);
    if (it == graph.preds.end()) continue;
    for (const auto& [from, kind] : it->second) {
      (void)kind;
      if (closure.insert(from).second) queue.push_back(from);
    }
  }
  return closure;
}

namespace {

// Pruned statement reconstruction. Spans stay statement-granular (leaf
// assignments, guard expressions, labels, sensitivity lists) even when a
// subtree survives whole, so slice spans grow monotonically with the target
// set.
struct Pruned {
  bool any = false;  // subtree still assigns a kept signal
  std::vector<std::string> lines;
  std::vector<Span> spans;
};

class Slicer {
 public:
  Slicer(const ModuleAst& ast, const SignalGraph& graph,
         const std::set<std::string>& targets)
      : ast_(ast), graph_(graph), targets_(targets) {}

  SignalSlice run() {
    for (const auto& t : targets_) {
      const PortDecl* p = ast_.find_port(t);
      if (p == nullptr || p->dir != Direction::Output) {
        throw Error(ErrorKind::UnknownSignal,
                    "'" + t + "' is not an output port of module " + ast_.name);
      }
    }
    SignalSlice slice;
    slice.targets = targets_;
    slice.kept_signals = backward_closure(graph_, targets_);
    keep_ = &slice.kept_signals;

    build_units();
    assemble(slice);
    validate(slice);
    return slice;
  }

 private:
  struct Unit {
    std::size_t offset;
    int seq;
    std::string text;
  };

  bool kept(const std::string& sig) const { return keep_->count(sig) > 0; }

  std::string_view text_of(Span s) const { return span_text(ast_.src.text, s); }

  static std::string indent_of(int depth) {
    return std::string(static_cast<std::size_t>(depth) * 2, ' ');
  }

  std::string range_text(const Range& r) const {
    if (!r.declared) return "";
    std::ostringstream os;
    os << "[" << r.msb << ":" << r.lsb << "] ";
    return os.str();
  }

  std::string header_text() const {
    std::ostringstream os;
    os << "module " << ast_.name << " (";
    bool first = true;
    for (const auto& p : ast_.ports) {
      bool keep_port = (p.dir == Direction::Input && kept(p.name)) ||
                       (p.dir == Direction::Output && targets_.count(p.name));
      if (!keep_port) continue;
      if (!first) os << ", ";
      first = false;
      if (ast_.ansi_header) {
        os << (p.dir == Direction::Input ? "input " : "output ");
        if (p.kind == NetKind::Reg) os << "reg ";
        os << range_text(p.range) << p.name;
      } else {
        os << p.name;
      }
    }
    os << ");";
    return os.str();
  }

  void add_span(Span s) { spans_.push_back(s); }

  Pruned prune_list(const std::vector<StmtPtr>& stmts, int depth) {
    Pruned out;
    for (const auto& st : stmts) {
      Pruned p = prune_stmt(*st, depth);
      out.any = out.any || p.any;
      if (p.any) {
        out.lines.insert(out.lines.end(), p.lines.begin(), p.lines.end());
        out.spans.insert(out.spans.end(), p.spans.begin(), p.spans.end());
      }
    }
    return out;
  }

  Pruned prune_stmt(const Stmt& s, int depth) {
    Pruned out;
    const std::string pad = indent_of(depth);
    switch (s.kind) {
      case Stmt::Kind::Blocking:
      case Stmt::Kind::Nonblocking:
        out.any = kept(s.lhs.name);
        if (out.any) {
          out.lines.push_back(pad + std::string(text_of(s.span)));
          out.spans.push_back(s.span);
        }
        return out;
      case Stmt::Kind::If: {
        Pruned t = prune_list(s.then_body, depth + 1);
        Pruned e = prune_list(s.else_body, depth + 1);
        out.any = t.any || e.any;
        if (!out.any) return out;
        out.lines.push_back(pad + "if (" + std::string(text_of(s.cond_span)) +
                            ") begin");
        out.spans.push_back(s.cond_span);
        out.lines.insert(out.lines.end(), t.lines.begin(), t.lines.end());
        out.spans.insert(out.spans.end(), t.spans.begin(), t.spans.end());
        if (e.any) {
          out.lines.push_back(pad + "end else begin");
          out.lines.insert(out.lines.end(), e.lines.begin(), e.lines.end());
          out.spans.insert(out.spans.end(), e.spans.begin(), e.spans.end());
        }
        out.lines.push_back(pad + "end");
        return out;
      }
      case Stmt::Kind::Case: {
        std::vector<Pruned> arm_results;
        for (const auto& arm : s.arms) {
          Pruned p = prune_list(arm.body, depth + 2);
          out.any = out.any || p.any;
          arm_results.push_back(std::move(p));
        }
        if (!out.any) return out;
        out.lines.push_back(pad + (s.is_casez ? "casez (" : "case (") +
                            std::string(text_of(s.case_expr_span)) + ")");
        out.spans.push_back(s.case_expr_span);
        for (std::size_t i = 0; i < s.arms.size(); ++i) {
          if (!arm_results[i].any) continue;
          out.lines.push_back(indent_of(depth + 1) +
                              std::string(text_of(s.arms[i].label_span)) +
                              ": begin");
          out.spans.push_back(s.arms[i].label_span);
          out.lines.insert(out.lines.end(), arm_results[i].lines.begin(),
                           arm_results[i].lines.end());
          out.spans.insert(out.spans.end(), arm_results[i].spans.begin(),
                           arm_results[i].spans.end());
          out.lines.push_back(indent_of(depth + 1) + "end");
        }
        out.lines.push_back(pad + "endcase");
        return out;
      }
    }
    return out;
  }

  void build_units() {
    for (const auto& d : ast_.decls) {
      if (!kept(d.name)) continue;
      push_body_unit(d.span);
    }
    // Non-ANSI kept ports keep their body declaration statements.
    if (!ast_.ansi_header) {
      std::set<std::pair<std::size_t, std::size_t>> seen;
      for (const auto& p : ast_.ports) {
        bool keep_port = (p.dir == Direction::Input && kept(p.name)) ||
                         (p.dir == Direction::Output && targets_.count(p.name));
        if (!keep_port) continue;
        for (Span s : p.body_decl_spans) {
          if (seen.insert({s.start, s.end}).second) push_body_unit(s);
        }
      }
    }
    for (const auto& item : ast_.items) {
      if (const auto* ca = std::get_if<ContinuousAssign>(&item)) {
        if (kept(ca->lhs.name)) push_body_unit(ca->span);
      } else if (const auto* blk = std::get_if<AlwaysBlock>(&item)) {
        Pruned p = prune_list(blk->body, 1);
        if (!p.any) continue;
        std::ostringstream os;
        os << "always @(" << text_of(blk->sens_span) << ") begin\n";
        for (const auto& line : p.lines) os << line << "\n";
        os << "end";
        units_.push_back(Unit{blk->span.start, 0, os.str()});
        add_span(blk->sens_span);
        for (Span s : p.spans) add_span(s);
      }
    }
  }

  void push_body_unit(Span s) {
    units_.push_back(Unit{s.start, 0, std::string(text_of(s))});
    add_span(s);
  }

  // Word-boundary search; finds parameter references in kept text.
  static bool mentions_word(std::string_view text, std::string_view word) {
    std::size_t pos = 0;
    while ((pos = text.find(word, pos)) != std::string_view::npos) {
      bool left_ok =
          pos == 0 || (!std::isalnum(static_cast<unsigned char>(text[pos - 1])) &&
                       text[pos - 1] != '_' && text[pos - 1] != '$');
      std::size_t after = pos + word.size();
      bool right_ok =
          after >= text.size() ||
          (!std::isalnum(static_cast<unsigned char>(text[after])) &&
           text[after] != '_' && text[after] != '$');
      if (left_ok && right_ok) return true;
      pos += 1;
    }
    return false;
  }

  void assemble(SignalSlice& slice) {
    // Parameters referenced anywhere in the kept body travel with the slice;
    // references inside kept parameter declarations chain transitively.
    std::string probe;
    for (const auto& u : units_) {
      probe += u.text;
      probe += '\n';
    }
    std::set<std::string> needed;
    bool grew = true;
    while (grew) {
      grew = false;
      for (const auto& p : ast_.params) {
        if (needed.count(p.name)) continue;
        bool used = mentions_word(probe, p.name);
        if (!used) {
          for (const auto& n : needed) {
            const ParamDecl* dep = ast_.find_param(n);
            if (dep && std::find(dep->param_refs.begin(), dep->param_refs.end(),
                                 p.name) != dep->param_refs.end()) {
              used = true;
              break;
            }
          }
        }
        if (used) {
          needed.insert(p.name);
          grew = true;
        }
      }
    }

    int seq = 0;
    std::set<std::pair<std::size_t, std::size_t>> param_spans_seen;
    for (const auto& p : ast_.params) {
      if (!needed.count(p.name)) continue;
      if (p.in_header) {
        units_.push_back(Unit{ast_.header_span.end, ++seq,
                              "parameter " + p.name + " = " +
                                  std::to_string(p.value) + ";"});
      } else if (param_spans_seen.insert({p.span.start, p.span.end}).second) {
        push_body_unit(p.span);
      }
    }

    // Outputs inside the closure but not targeted are demoted to internal
    // nets so their kept drivers still compile.
    for (const auto& p : ast_.ports) {
      if (p.dir != Direction::Output) continue;
      if (!kept(p.name) || targets_.count(p.name)) continue;
      units_.push_back(
          Unit{ast_.header_span.end, ++seq,
               std::string(p.kind == NetKind::Reg ? "reg " : "wire ") +
                   range_text(p.range) + p.name + ";"});
    }

    std::sort(units_.begin(), units_.end(), [](const Unit& a, const Unit& b) {
      return a.offset != b.offset ? a.offset < b.offset : a.seq < b.seq;
    });

    std::ostringstream os;
    os << header_text() << "\n";
    for (const auto& u : units_) os << u.text << "\n";
    os << "endmodule\n";
    slice.text = os.str();

    add_span(ast_.header_span);
    std::sort(spans_.begin(), spans_.end());
    spans_.erase(std::unique(spans_.begin(), spans_.end()), spans_.end());
    slice.spans = spans_;
    for (std::size_t i = 0; i < slice.spans.size(); ++i) {
      const Span& s = slice.spans[i];
      if (s.end > ast_.span.end || s.start < ast_.span.start ||
          (i > 0 && slice.spans[i - 1].end > s.start)) {
        throw Error(ErrorKind::SliceNotCompilable,
                    "internal error: slice spans overlap or escape the module");
      }
    }
    for (const Span& s : slice.spans) {
      if (s.start >= ast_.header_span.end) slice.body_spans.push_back(s);
    }
  }

  void validate(const SignalSlice& slice) {
    try {
      SourceText st = normalize_source(slice.text, ast_.src.origin + "#slice");
      ModuleAst reparsed = parse_module(st);
      (void)reparsed;
    } catch (const Error& e) {
      throw Error(ErrorKind::SliceNotCompilable,
                  "internal error: slice does not re-parse: " +
                      std::string(e.what()));
    }
  }

  const ModuleAst& ast_;
  const SignalGraph& graph_;
  std::set<std::string> targets_;
  const std::set<std::string>* keep_ = nullptr;
  std::vector<Unit> units_;
  std::vector<Span> spans_;
};

}  // namespace

SignalSlice extract_slice(const ModuleAst& ast, const SignalGraph& graph,
                          const std::set<std::string>& targets) {
  return Slicer(ast, graph, targets).run();
}

}  // namespace salv
