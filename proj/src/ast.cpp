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

#include "salvkit/ast.hpp"

#include <algorithm>

namespace salv {

Span item_span(const Item& item) {
  return std::visit([](const auto& node) { return node.span; }, item);
}

int ModuleAst::signal_index(std::string_view sig) const {
  for (std::size_t i = 0; i < signals.size(); ++i) {
    if (signals[i].name == sig) return static_cast<int>(i);
  }
  return -1;
}

const SignalInfo* ModuleAst::find_signal(std::string_view sig) const {
  int idx = signal_index(sig);
  return idx < 0 ? nullptr : &signals[idx];
}

const PortDecl* ModuleAst::find_port(std::string_view port) const {
  for (const auto& p : ports) {
    if (p.name == port) return &p;
  }
  return nullptr;
}

bool ModuleAst::is_output(std::string_view sig) const {
  const PortDecl* p = find_port(sig);
  return p != nullptr && p->dir == Direction::Output;
}

std::vector<std::string> ModuleAst::output_names() const {
  std::vector<std::string> out;
  for (const auto& p : ports) {
    if (p.dir == Direction::Output) out.push_back(p.name);
  }
  return out;
}

const ParamDecl* ModuleAst::find_param(std::string_view param) const {
  for (const auto& p : params) {
    if (p.name == param) return &p;
  }
  return nullptr;
}

namespace {

bool lvalue_equal(const LValue& a, const LValue& b) {
  return a.name == b.name && a.sel_msb == b.sel_msb && a.sel_lsb == b.sel_lsb;
}

}  // namespace

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Number:
      if (a.value != b.value || a.wildcard != b.wildcard || a.sized != b.sized)
        return false;
      if (a.sized && a.literal_width != b.literal_width) return false;
      break;
    case Expr::Kind::Ident:
      if (a.name != b.name) return false;
      break;
    case Expr::Kind::Select:
      if (a.name != b.name || a.sel_msb != b.sel_msb ||
          a.sel_lsb != b.sel_lsb || a.part_select != b.part_select)
        return false;
      break;
    case Expr::Kind::Unary:
      if (a.uop != b.uop) return false;
      break;
    case Expr::Kind::Binary:
      if (a.bop != b.bop) return false;
      break;
    case Expr::Kind::Replicate:
      if (a.rep_count != b.rep_count) return false;
      break;
    case Expr::Kind::Ternary:
    case Expr::Kind::Concat:
      break;
  }
  if (a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!expr_equal(*a.args[i], *b.args[i])) return false;
  }
  return true;
}

bool stmt_list_equal(const std::vector<StmtPtr>& a, const std::vector<StmtPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!stmt_equal(*a[i], *b[i])) return false;
  }
  return true;
}

bool stmt_equal(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Stmt::Kind::Blocking:
    case Stmt::Kind::Nonblocking:
      return lvalue_equal(a.lhs, b.lhs) && expr_equal(*a.rhs, *b.rhs);
    case Stmt::Kind::If:
      if (!expr_equal(*a.cond, *b.cond)) return false;
      if (a.has_else != b.has_else) return false;
      return stmt_list_equal(a.then_body, b.then_body) &&
             stmt_list_equal(a.else_body, b.else_body);
    case Stmt::Kind::Case: {
      if (a.is_casez != b.is_casez) return false;
      if (!expr_equal(*a.case_expr, *b.case_expr)) return false;
      if (a.arms.size() != b.arms.size()) return false;
      for (std::size_t i = 0; i < a.arms.size(); ++i) {
        const CaseArm& x = a.arms[i];
        const CaseArm& y = b.arms[i];
        if (x.is_default != y.is_default) return false;
        if (x.labels.size() != y.labels.size()) return false;
        for (std::size_t k = 0; k < x.labels.size(); ++k) {
          if (!expr_equal(*x.labels[k], *y.labels[k])) return false;
        }
        if (!stmt_list_equal(x.body, y.body)) return false;
      }
      return true;
    }
  }
  return false;
}

const char* unary_op_token(UnaryOp op) {
  switch (op) {
    case UnaryOp::BitNot: return "~";
    case UnaryOp::LogicNot: return "!";
    case UnaryOp::Negate: return "-";
    case UnaryOp::RedAnd: return "&";
    case UnaryOp::RedOr: return "|";
    case UnaryOp::RedXor: return "^";
  }
  return "?";
}

const char* binary_op_token(BinaryOp op) {
  switch (op) {
    case BinaryOp::BitAnd: return "&";
    case BinaryOp::BitOr: return "|";
    case BinaryOp::BitXor: return "^";
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Shl: return "<<";
    case BinaryOp::Shr: return ">>";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::LogicAnd: return "&&";
    case BinaryOp::LogicOr: return "||";
  }
  return "?";
}

}  // namespace salv
