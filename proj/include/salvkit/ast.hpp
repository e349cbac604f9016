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

#ifndef SALVKIT_AST_HPP
#define SALVKIT_AST_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "salvkit/diagnostics.hpp"
#include "salvkit/source.hpp"
#include "salvkit/span.hpp"

namespace salv {

enum class Direction { Input, Output };
enum class NetKind { Wire, Reg };

// Declared bit range [msb:lsb]. width = |msb - lsb| + 1 <= 64.
struct Range {
  int msb = 0;
  int lsb = 0;
  bool declared = false;  // false for scalar (no [msb:lsb])
  int width() const { return (msb >= lsb ? msb - lsb : lsb - msb) + 1; }
  bool ascending() const { return msb < lsb; }
  // Value-bit position (0 = LSB of the stored value) for a source index.
  int value_bit(int index) const { return msb >= lsb ? index - lsb : lsb - index; }
};

enum class UnaryOp { BitNot, LogicNot, Negate, RedAnd, RedOr, RedXor };
enum class BinaryOp {
  BitAnd, BitOr, BitXor,
  Add, Sub, Mul,
  Shl, Shr,
  Eq, Ne, Lt, Le, Gt, Ge,
  LogicAnd, LogicOr,
};

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

// One node class with a kind tag; children in `args`. Every node carries a
// byte span into the module's normalized source and two width annotations
// filled during parsing: self_width (self-determined size) and eval_width
// (after assignment-context propagation; evaluation masks to it).
struct Expr {
  enum class Kind { Number, Ident, Unary, Binary, Ternary, Concat, Replicate, Select };

  Kind kind = Kind::Number;
  Span span;

  // Number
  std::uint64_t value = 0;
  std::uint64_t wildcard = 0;  // casez don't-care bits (z/? digits)
  int literal_width = 32;
  bool sized = false;

  // Ident / Select base
  std::string name;
  bool is_const_ref = false;  // resolved to a parameter constant
  int sig_index = -1;         // resolved signal slot (parser fills)

  // Select: indices as written, plus resolved value-bit positions (high >= low)
  int sel_msb = -1;
  int sel_lsb = -1;
  int val_high = -1;
  int val_low = -1;
  bool part_select = false;

  UnaryOp uop = UnaryOp::BitNot;
  BinaryOp bop = BinaryOp::BitAnd;
  std::vector<ExprPtr> args;  // unary:1  binary:2  ternary:cond,then,else  concat:n  replicate:1
  std::uint64_t rep_count = 1;

  int self_width = 1;
  int eval_width = 1;
};

// Assignment target: one signal, optionally a constant bit/part-select.
struct LValue {
  std::string name;
  int sig_index = -1;
  Span span;
  int sel_msb = -1;  // as written; -1 = whole signal
  int sel_lsb = -1;
  int val_high = -1;  // resolved value-bit positions
  int val_low = -1;
  bool part_select = false;
  int width = 0;  // bits actually assigned
  bool has_select() const { return sel_msb >= 0; }
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct CaseArm {
  bool is_default = false;
  std::vector<ExprPtr> labels;  // constant (possibly wildcard) expressions
  std::vector<StmtPtr> body;
  bool body_is_block = false;
  Span span;        // label through end of arm
  Span label_span;  // label list (or "default")
};

struct Stmt {
  enum class Kind { Blocking, Nonblocking, If, Case };

  Kind kind = Kind::Blocking;
  Span span;

  // Blocking / Nonblocking
  LValue lhs;
  ExprPtr rhs;

  // If
  ExprPtr cond;
  Span cond_span;
  std::vector<StmtPtr> then_body;
  std::vector<StmtPtr> else_body;
  bool has_else = false;
  bool then_is_block = false;
  bool else_is_block = false;

  // Case
  ExprPtr case_expr;
  Span case_expr_span;
  bool is_casez = false;
  std::vector<CaseArm> arms;
};

enum class EdgeKind { Level, Pos, Neg };

struct SensItem {
  EdgeKind edge = EdgeKind::Level;
  std::string signal;
  Span span;
};

struct AlwaysBlock {
  bool star = false;            // @(*) or @*
  std::vector<SensItem> sens;   // empty when star
  Span sens_span;               // bytes inside @( ... ), or the '*'
  std::vector<StmtPtr> body;
  bool body_is_block = false;
  Span span;
};

struct ContinuousAssign {
  LValue lhs;
  ExprPtr rhs;
  Span span;
};

// A recognizable construct outside the supported subset that the parser
// skipped with balanced scanning (initial block, instantiation, ...).
struct UnsupportedItem {
  std::string construct;
  Span span;
};

using Item = std::variant<ContinuousAssign, AlwaysBlock, UnsupportedItem>;

Span item_span(const Item& item);

struct PortDecl {
  std::string name;
  Direction dir = Direction::Input;
  NetKind kind = NetKind::Wire;
  Range range;
  bool ansi = true;
  Span span;              // ANSI: decl inside the header; non-ANSI: first body decl
  Span header_name_span;  // name token in the header port list
  std::vector<Span> body_decl_spans;       // non-ANSI direction/reg decl statements
  std::vector<std::string> param_refs;     // parameters used in the range
  int sig_index = -1;
  int width() const { return range.declared ? range.width() : 1; }
};

struct NetDecl {
  std::string name;
  NetKind kind = NetKind::Wire;
  Range range;
  ExprPtr init;  // optional `wire x = expr;`
  Span span;
  std::vector<std::string> param_refs;
  int sig_index = -1;
  int width() const { return range.declared ? range.width() : 1; }
};

struct ParamDecl {
  std::string name;
  std::int64_t value = 0;
  bool local = false;      // localparam
  bool in_header = false;  // declared in `#( ... )`
  Span span;               // whole declaration statement (shared by a comma list)
  std::vector<std::string> param_refs;
};

// Flat signal table: ports first (declaration order), then nets. Expr/LValue
// sig_index fields point into it.
struct SignalInfo {
  std::string name;
  int width = 1;
  bool is_port = false;
  Direction dir = Direction::Input;
  NetKind kind = NetKind::Wire;
};

struct ModuleAst {
  SourceText src;
  std::string name;
  Span name_span;
  bool ansi_header = true;

  std::vector<PortDecl> ports;
  std::vector<ParamDecl> params;
  std::vector<NetDecl> decls;
  std::vector<Item> items;

  std::vector<SignalInfo> signals;

  Span span;         // 'module' .. 'endmodule'
  Span header_span;  // 'module' .. the header ';'
  Span body_span;    // between header ';' and 'endmodule'

  // Tolerated-construct diagnostics gathered during parsing; reported by
  // supported_subset_check.
  std::vector<Diagnostic> tolerated;

  int signal_index(std::string_view sig) const;
  const SignalInfo* find_signal(std::string_view sig) const;
  const PortDecl* find_port(std::string_view port) const;
  bool is_output(std::string_view sig) const;
  std::vector<std::string> output_names() const;
  const ParamDecl* find_param(std::string_view param) const;
};

// Structural equality ignoring spans, widths, and resolution slots; used by
// span-fidelity checks (bytes at a node's span must re-parse to an equal node).
bool expr_equal(const Expr& a, const Expr& b);
bool stmt_equal(const Stmt& a, const Stmt& b);
bool stmt_list_equal(const std::vector<StmtPtr>& a, const std::vector<StmtPtr>& b);

const char* unary_op_token(UnaryOp op);
const char* binary_op_token(BinaryOp op);

}  // namespace salv

#endif  // SALVKIT_AST_HPP
