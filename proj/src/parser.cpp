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

#include "salvkit/parser.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <map>
#include <set>

#include "salvkit/lexer.hpp"

namespace salv {

namespace {

int bits_needed(std::uint64_t v) {
  return v == 0 ? 1 : 64 - std::countl_zero(v);
}

bool is_keyword(std::string_view s) {
  static const std::set<std::string_view> kw = {
      "module", "endmodule", "input", "output", "inout", "wire", "reg",
      "assign", "always", "begin", "end", "if", "else", "case", "casez",
      "casex", "endcase", "default", "posedge", "negedge", "or", "parameter",
      "localparam", "initial", "function", "endfunction", "task", "endtask",
      "generate", "endgenerate", "genvar", "for", "while", "repeat",
      "forever", "integer", "real", "time", "specify", "endspecify",
      "defparam", "fork", "join", "event", "signed", "deassign", "force",
      "release", "wait"};
  return kw.count(s) > 0;
}

struct PendingSelect {
  int msb = -1;
  int lsb = -1;
  bool part = false;
};

class Parser {
 public:
  explicit Parser(const SourceText& src, bool fragment = false)
      : src_(src), fragment_(fragment), toks_(tokenize(src)) {}

  ModuleAst parse() {
    mod_.src = src_;
    parse_module_shell();
    resolve();
    annotate_widths();
    return std::move(mod_);
  }

  ExprPtr parse_expr_only() {
    ExprPtr e = parse_expr();
    if (!at_eof()) {
      fail_here(DiagCode::SyntaxError, "trailing input after expression");
    }
    return e;
  }

  std::vector<StmtPtr> parse_stmts_only() {
    std::vector<StmtPtr> out;
    while (!at_eof()) {
      if (StmtPtr s = parse_stmt()) out.push_back(std::move(s));
    }
    return out;
  }

 private:
  // ---- token helpers -------------------------------------------------

  const Token& peek(int ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  bool at_eof() const { return peek().kind == Token::Kind::Eof; }
  bool at(std::string_view text) const { return peek().text == text; }
  bool at_ident() const { return peek().kind == Token::Kind::Ident; }

  bool accept(std::string_view text) {
    if (at(text)) {
      take();
      return true;
    }
    return false;
  }

  const Token& expect(std::string_view text, const char* what) {
    if (!at(text)) {
      fail_here(DiagCode::SyntaxError,
                std::string("expected '") + std::string(text) + "' " + what);
    }
    return take();
  }

  std::string expect_name(const char* what) {
    if (!at_ident() || is_keyword(peek().text)) {
      fail_here(DiagCode::SyntaxError, std::string("expected identifier ") + what);
    }
    return std::string(take().text);
  }

  std::size_t prev_end() const { return pos_ == 0 ? 0 : toks_[pos_ - 1].end; }

  [[noreturn]] void fail_at(std::size_t offset, DiagCode code, std::string msg) const {
    LineCol lc = line_col_at(src_.text, offset);
    throw Error(error_kind_for(code),
                Diagnostic{code, src_.origin, lc.line, lc.col, std::move(msg)});
  }
  [[noreturn]] void fail_here(DiagCode code, std::string msg) const {
    fail_at(peek().start, code, std::move(msg));
  }

  void tolerate(std::size_t offset, std::string construct) {
    LineCol lc = line_col_at(src_.text, offset);
    mod_.tolerated.push_back(Diagnostic{DiagCode::UnsupportedConstruct,
                                        src_.origin, lc.line, lc.col,
                                        "unsupported construct: " + construct});
  }

  // ---- constant expressions ------------------------------------------

  std::int64_t const_eval(const Expr& e, std::vector<std::string>* touched) {
    switch (e.kind) {
      case Expr::Kind::Number:
        if (e.wildcard != 0) {
          fail_at(e.span.start, DiagCode::UnsupportedConstruct,
                  "wildcard bits in constant expression");
        }
        return static_cast<std::int64_t>(e.value);
      case Expr::Kind::Ident: {
        auto it = param_values_.find(e.name);
        if (it == param_values_.end()) {
          fail_at(e.span.start, DiagCode::UnresolvedIdentifier,
                  "constant expression references non-parameter '" + e.name + "'");
        }
        if (touched) touched->push_back(e.name);
        return it->second;
      }
      case Expr::Kind::Unary: {
        std::int64_t v = const_eval(*e.args[0], touched);
        switch (e.uop) {
          case UnaryOp::BitNot: return ~v;
          case UnaryOp::LogicNot: return v == 0 ? 1 : 0;
          case UnaryOp::Negate: return -v;
          default:
            fail_at(e.span.start, DiagCode::UnsupportedConstruct,
                    "reduction operator in constant expression");
        }
      }
      case Expr::Kind::Binary: {
        std::int64_t a = const_eval(*e.args[0], touched);
        std::int64_t b = const_eval(*e.args[1], touched);
        switch (e.bop) {
          case BinaryOp::BitAnd: return a & b;
          case BinaryOp::BitOr: return a | b;
          case BinaryOp::BitXor: return a ^ b;
          case BinaryOp::Add: return a + b;
          case BinaryOp::Sub: return a - b;
          case BinaryOp::Mul: return a * b;
          case BinaryOp::Shl: return b >= 64 ? 0 : a << b;
          case BinaryOp::Shr:
            return b >= 64 ? 0
                           : static_cast<std::int64_t>(
                                 static_cast<std::uint64_t>(a) >> b);
          case BinaryOp::Eq: return a == b;
          case BinaryOp::Ne: return a != b;
          case BinaryOp::Lt: return a < b;
          case BinaryOp::Le: return a <= b;
          case BinaryOp::Gt: return a > b;
          case BinaryOp::Ge: return a >= b;
          case BinaryOp::LogicAnd: return (a != 0 && b != 0) ? 1 : 0;
          case BinaryOp::LogicOr: return (a != 0 || b != 0) ? 1 : 0;
        }
        break;
      }
      case Expr::Kind::Ternary:
        return const_eval(*e.args[0], touched) != 0
                   ? const_eval(*e.args[1], touched)
                   : const_eval(*e.args[2], touched);
      default:
        break;
    }
    fail_at(e.span.start, DiagCode::UnsupportedConstruct,
            "expression is not constant");
  }

  std::int64_t parse_const_expr(std::vector<std::string>* touched) {
    ExprPtr e = parse_expr();
    return const_eval(*e, touched);
  }

  Range parse_range(std::vector<std::string>* touched) {
    Range r;
    if (!at("[")) return r;
    std::size_t start = peek().start;
    take();
    std::int64_t msb = parse_const_expr(touched);
    expect(":", "in range");
    std::int64_t lsb = parse_const_expr(touched);
    expect("]", "after range");
    if (msb < 0 || lsb < 0) {
      fail_at(start, DiagCode::SyntaxError, "negative range bound");
    }
    r.msb = static_cast<int>(msb);
    r.lsb = static_cast<int>(lsb);
    r.declared = true;
    if (r.width() > 64) {
      fail_at(start, DiagCode::WidthOverflow,
              "declared width " + std::to_string(r.width()) + " exceeds 64 bits");
    }
    return r;
  }

  // ---- literals -------------------------------------------------------

  ExprPtr make_number(std::uint64_t value, std::uint64_t wildcard, int width,
                      bool sized, Span span) {
    auto e = std::make_unique<Expr>();
    e->kind = Expr::Kind::Number;
    e->value = value;
    e->wildcard = wildcard;
    e->literal_width = width;
    e->sized = sized;
    e->span = span;
    return e;
  }

  std::uint64_t parse_decimal(std::string_view digits, std::size_t at_offset) {
    std::uint64_t v = 0;
    for (char c : digits) {
      if (c == '_') continue;
      if (v > (~std::uint64_t{0} - (c - '0')) / 10) {
        fail_at(at_offset, DiagCode::WidthOverflow,
                "decimal literal exceeds 64 bits");
      }
      v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return v;
  }

  ExprPtr parse_literal() {
    const Token& first = take();
    if (first.kind == Token::Kind::Number && peek().kind != Token::Kind::Based) {
      std::uint64_t v = parse_decimal(first.text, first.start);
      return make_number(v, 0, std::max(32, bits_needed(v)), false, first.span());
    }

    int size = 0;
    std::size_t span_start = first.start;
    const Token* based = &first;
    if (first.kind == Token::Kind::Number) {
      size = static_cast<int>(parse_decimal(first.text, first.start));
      if (size <= 0) fail_at(first.start, DiagCode::SyntaxError, "zero-width literal");
      if (size > 64) {
        fail_at(first.start, DiagCode::WidthOverflow,
                "literal width " + std::to_string(size) + " exceeds 64 bits");
      }
      if (peek().kind != Token::Kind::Based) {
        fail_here(DiagCode::SyntaxError, "expected based literal after size");
      }
      based = &take();
    }

    std::string_view text = based->text;  // '<base><digits>
    char base = static_cast<char>(std::tolower(static_cast<unsigned char>(text[1])));
    std::string_view digits = text.substr(2);
    std::uint64_t value = 0;
    std::uint64_t wildcard = 0;

    if (base == 'd') {
      for (char c : digits) {
        if (!std::isdigit(static_cast<unsigned char>(c)) && c != '_') {
          fail_at(based->start, DiagCode::SyntaxError,
                  "invalid digit in decimal literal");
        }
      }
      value = parse_decimal(digits, based->start);
    } else {
      int bits_per = base == 'b' ? 1 : base == 'o' ? 3 : 4;
      for (char c : digits) {
        if (c == '_') continue;
        int digit = 0;
        std::uint64_t wild = 0;
        if (c == 'x' || c == 'X') {
          fail_at(based->start, DiagCode::UnsupportedConstruct,
                  "x literal (two-state simulation only)");
        } else if (c == 'z' || c == 'Z' || c == '?') {
          wild = (bits_per >= 64) ? ~std::uint64_t{0}
                                  : ((std::uint64_t{1} << bits_per) - 1);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
          digit = c - '0';
        } else {
          digit = 10 + (std::tolower(static_cast<unsigned char>(c)) - 'a');
        }
        if (digit >= (1 << bits_per)) {
          fail_at(based->start, DiagCode::SyntaxError, "digit out of base range");
        }
        if (bits_needed(value) + bits_per > 64 && (value >> (64 - bits_per)) != 0) {
          fail_at(based->start, DiagCode::WidthOverflow,
                  "literal exceeds 64 bits");
        }
        value = (value << bits_per) | static_cast<std::uint64_t>(digit);
        wildcard = (wildcard << bits_per) | wild;
      }
    }

    Span span{span_start, based->end};
    if (size > 0) {
      std::uint64_t mask = size >= 64 ? ~std::uint64_t{0}
                                      : ((std::uint64_t{1} << size) - 1);
      return make_number(value & mask, wildcard & mask, size, true, span);
    }
    int width = std::max(32, bits_needed(value | wildcard));
    return make_number(value, wildcard, width, false, span);
  }

  // ---- expressions ----------------------------------------------------

  ExprPtr parse_expr() { return parse_ternary(); }

  ExprPtr parse_ternary() {
    ExprPtr cond = parse_binary(0);
    if (!at("?")) return cond;
    take();
    ExprPtr then_e = parse_ternary();
    expect(":", "in conditional expression");
    ExprPtr else_e = parse_ternary();
    auto e = std::make_unique<Expr>();
    e->kind = Expr::Kind::Ternary;
    e->span = Span{cond->span.start, else_e->span.end};
    e->args.push_back(std::move(cond));
    e->args.push_back(std::move(then_e));
    e->args.push_back(std::move(else_e));
    return e;
  }

  // Binary levels, loosest first.
  static constexpr int kBinaryLevels = 9;
  bool binary_op_at_level(int level, BinaryOp& op) const {
    std::string_view t = peek().text;
    switch (level) {
      case 0: if (t == "||") { op = BinaryOp::LogicOr; return true; } return false;
      case 1: if (t == "&&") { op = BinaryOp::LogicAnd; return true; } return false;
      case 2: if (t == "|") { op = BinaryOp::BitOr; return true; } return false;
      case 3: if (t == "^") { op = BinaryOp::BitXor; return true; } return false;
      case 4: if (t == "&") { op = BinaryOp::BitAnd; return true; } return false;
      case 5:
        if (t == "==") { op = BinaryOp::Eq; return true; }
        if (t == "!=") { op = BinaryOp::Ne; return true; }
        return false;
      case 6:
        if (t == "<") { op = BinaryOp::Lt; return true; }
        if (t == "<=") { op = BinaryOp::Le; return true; }
        if (t == ">") { op = BinaryOp::Gt; return true; }
        if (t == ">=") { op = BinaryOp::Ge; return true; }
        return false;
      case 7:
        if (t == "<<") { op = BinaryOp::Shl; return true; }
        if (t == ">>") { op = BinaryOp::Shr; return true; }
        return false;
      case 8:
        if (t == "+") { op = BinaryOp::Add; return true; }
        if (t == "-") { op = BinaryOp::Sub; return true; }
        return false;
      default:
        return false;
    }
  }

  ExprPtr parse_binary(int level) {
    if (level >= kBinaryLevels) return parse_mul();
    ExprPtr lhs = parse_binary(level + 1);
    BinaryOp op;
    while (binary_op_at_level(level, op)) {
      take();
      ExprPtr rhs = parse_binary(level + 1);
      auto e = std::make_unique<Expr>();
      e->kind = Expr::Kind::Binary;
      e->bop = op;
      e->span = Span{lhs->span.start, rhs->span.end};
      e->args.push_back(std::move(lhs));
      e->args.push_back(std::move(rhs));
      lhs = std::move(e);
    }
    return lhs;
  }

  ExprPtr parse_mul() {
    ExprPtr lhs = parse_unary();
    while (true) {
      if (at("*")) {
        take();
        ExprPtr rhs = parse_unary();
        auto e = std::make_unique<Expr>();
        e->kind = Expr::Kind::Binary;
        e->bop = BinaryOp::Mul;
        e->span = Span{lhs->span.start, rhs->span.end};
        e->args.push_back(std::move(lhs));
        e->args.push_back(std::move(rhs));
        lhs = std::move(e);
      } else if (at("/") || at("%") || at("**")) {
        fail_here(DiagCode::UnsupportedConstruct,
                  "operator '" + std::string(peek().text) + "'");
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_unary() {
    UnaryOp op;
    if (at("~")) op = UnaryOp::BitNot;
    else if (at("!")) op = UnaryOp::LogicNot;
    else if (at("-")) op = UnaryOp::Negate;
    else if (at("+")) { take(); return parse_unary(); }
    else if (at("&")) op = UnaryOp::RedAnd;
    else if (at("|")) op = UnaryOp::RedOr;
    else if (at("^")) op = UnaryOp::RedXor;
    else return parse_primary();
    std::size_t start = peek().start;
    take();
    ExprPtr arg = parse_unary();
    auto e = std::make_unique<Expr>();
    e->kind = Expr::Kind::Unary;
    e->uop = op;
    e->span = Span{start, arg->span.end};
    e->args.push_back(std::move(arg));
    return e;
  }

  ExprPtr parse_primary() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Number || t.kind == Token::Kind::Based) {
      return parse_literal();
    }
    if (t.is("(")) {
      take();
      ExprPtr inner = parse_expr();
      const Token& close = expect(")", "to close parenthesis");
      // Widen the span so re-parsing the node's bytes sees the parentheses.
      inner->span = Span{t.start, close.end};
      return inner;
    }
    if (t.is("{")) return parse_concat();
    if (t.kind == Token::Kind::Ident && !is_keyword(t.text)) {
      const Token& name_tok = take();
      auto e = std::make_unique<Expr>();
      e->name = std::string(name_tok.text);
      e->span = name_tok.span();
      if (at("[")) {
        PendingSelect sel = parse_select();
        e->kind = Expr::Kind::Select;
        e->sel_msb = sel.msb;
        e->sel_lsb = sel.lsb;
        e->part_select = sel.part;
        e->span.end = prev_end();
      } else {
        e->kind = Expr::Kind::Ident;
      }
      return e;
    }
    if (t.kind == Token::Kind::SysName) {
      fail_here(DiagCode::UnsupportedConstruct,
                "system function '" + std::string(t.text) + "'");
    }
    fail_here(DiagCode::SyntaxError,
              "unexpected token '" + std::string(t.text) + "' in expression");
  }

  PendingSelect parse_select() {
    PendingSelect sel;
    std::size_t start = peek().start;
    expect("[", "in select");
    std::int64_t a = parse_const_expr(nullptr);
    if (accept(":")) {
      std::int64_t b = parse_const_expr(nullptr);
      sel.part = true;
      sel.msb = static_cast<int>(a);
      sel.lsb = static_cast<int>(b);
    } else if (at("+") || at("-")) {
      fail_here(DiagCode::UnsupportedConstruct, "indexed part-select");
    } else {
      sel.msb = sel.lsb = static_cast<int>(a);
    }
    expect("]", "after select");
    if (sel.msb < 0 || sel.lsb < 0) {
      fail_at(start, DiagCode::SyntaxError, "negative select index");
    }
    return sel;
  }

  ExprPtr parse_concat() {
    const Token& open = expect("{", "to open concatenation");
    ExprPtr first = parse_expr();
    if (at("{")) {
      // Replication {N{...}}
      std::int64_t count = const_eval(*first, nullptr);
      if (count <= 0) {
        fail_at(first->span.start, DiagCode::SyntaxError,
                "replication count must be positive");
      }
      take();
      auto e = std::make_unique<Expr>();
      e->kind = Expr::Kind::Replicate;
      e->rep_count = static_cast<std::uint64_t>(count);
      e->args.push_back(parse_expr());
      while (accept(",")) {
        fail_here(DiagCode::UnsupportedConstruct,
                  "multiple expressions in replication body");
      }
      expect("}", "to close replication body");
      const Token& close = expect("}", "to close replication");
      e->span = Span{open.start, close.end};
      return e;
    }
    auto e = std::make_unique<Expr>();
    e->kind = Expr::Kind::Concat;
    e->args.push_back(std::move(first));
    while (accept(",")) e->args.push_back(parse_expr());
    const Token& close = expect("}", "to close concatenation");
    e->span = Span{open.start, close.end};
    return e;
  }

  // ---- statements -----------------------------------------------------

  LValue parse_lvalue() {
    LValue lv;
    if (at("{")) {
      fail_here(DiagCode::UnsupportedConstruct, "concatenation assignment target");
    }
    std::size_t start = peek().start;
    lv.name = expect_name("as assignment target");
    if (at("[")) {
      PendingSelect sel = parse_select();
      lv.sel_msb = sel.msb;
      lv.sel_lsb = sel.lsb;
      lv.part_select = sel.part;
    }
    lv.span = Span{start, prev_end()};
    return lv;
  }

  void skip_delay_control() {
    if (!at("#")) return;
    std::size_t start = peek().start;
    take();
    if (peek().kind == Token::Kind::Number) {
      take();
    } else if (at("(")) {
      skip_parens();
    }
    tolerate(start, "delay control");
  }

  // Returns null for tolerated no-op statements (system tasks).
  StmtPtr parse_stmt() {
    skip_delay_control();
    const Token& t = peek();

    if (t.is("if")) return parse_if();
    if (t.is("case") || t.is("casez") || t.is("casex")) return parse_case();
    if (t.kind == Token::Kind::SysName) {
      std::size_t start = t.start;
      tolerate(start, "system task '" + std::string(t.text) + "'");
      skip_to_semicolon();
      return nullptr;
    }
    if (t.is("for") || t.is("while") || t.is("repeat") || t.is("forever") ||
        t.is("wait") || t.is("fork")) {
      fail_here(DiagCode::UnsupportedConstruct,
                "statement '" + std::string(t.text) + "'");
    }

    auto s = std::make_unique<Stmt>();
    std::size_t start = t.start;
    s->lhs = parse_lvalue();
    if (accept("=")) {
      s->kind = Stmt::Kind::Blocking;
    } else if (accept("<=")) {
      s->kind = Stmt::Kind::Nonblocking;
    } else {
      fail_here(DiagCode::SyntaxError, "expected '=' or '<=' in assignment");
    }
    skip_delay_control();
    s->rhs = parse_expr();
    const Token& semi = expect(";", "after assignment");
    s->span = Span{start, semi.end};
    return s;
  }

  void parse_stmt_or_block(std::vector<StmtPtr>& body, bool& is_block) {
    if (at("begin")) {
      take();
      if (accept(":")) expect_name("as block label");
      is_block = true;
      while (!at("end")) {
        if (at_eof()) fail_here(DiagCode::SyntaxError, "unterminated begin block");
        if (StmtPtr s = parse_stmt()) body.push_back(std::move(s));
      }
      take();  // end
    } else {
      is_block = false;
      if (StmtPtr s = parse_stmt()) body.push_back(std::move(s));
    }
  }

  StmtPtr parse_if() {
    auto s = std::make_unique<Stmt>();
    s->kind = Stmt::Kind::If;
    std::size_t start = peek().start;
    take();  // if
    expect("(", "after 'if'");
    std::size_t cond_start = peek().start;
    s->cond = parse_expr();
    s->cond_span = Span{cond_start, prev_end()};
    expect(")", "after if condition");
    parse_stmt_or_block(s->then_body, s->then_is_block);
    if (at("else")) {
      take();
      s->has_else = true;
      if (at("if")) {
        s->else_body.push_back(parse_if());
        s->else_is_block = false;
      } else {
        parse_stmt_or_block(s->else_body, s->else_is_block);
      }
    }
    s->span = Span{start, prev_end()};
    return s;
  }

  StmtPtr parse_case() {
    auto s = std::make_unique<Stmt>();
    s->kind = Stmt::Kind::Case;
    std::size_t start = peek().start;
    std::string kw(take().text);
    if (kw == "casex") {
      tolerate(start, "casex");
      s->is_casez = true;  // parsed like casez; subset check rejects it
    } else {
      s->is_casez = (kw == "casez");
    }
    expect("(", "after case keyword");
    std::size_t expr_start = peek().start;
    s->case_expr = parse_expr();
    s->case_expr_span = Span{expr_start, prev_end()};
    expect(")", "after case expression");
    while (!at("endcase")) {
      if (at_eof()) fail_here(DiagCode::SyntaxError, "unterminated case");
      CaseArm arm;
      std::size_t arm_start = peek().start;
      if (at("default")) {
        arm.is_default = true;
        arm.label_span = peek().span();
        take();
        accept(":");
      } else {
        arm.labels.push_back(parse_expr());
        while (accept(",")) arm.labels.push_back(parse_expr());
        arm.label_span = Span{arm.labels.front()->span.start,
                              arm.labels.back()->span.end};
        expect(":", "after case label");
      }
      parse_stmt_or_block(arm.body, arm.body_is_block);
      arm.span = Span{arm_start, prev_end()};
      s->arms.push_back(std::move(arm));
    }
    const Token& endc = take();
    s->span = Span{start, endc.end};
    return s;
  }

  // ---- balanced skipping for tolerated constructs ----------------------

  void skip_parens() {
    expect("(", "to open");
    int depth = 1;
    while (depth > 0) {
      if (at_eof()) fail_here(DiagCode::SyntaxError, "unbalanced parentheses");
      const Token& t = take();
      if (t.is("(")) ++depth;
      if (t.is(")")) --depth;
    }
  }

  void skip_to_semicolon() {
    int paren = 0;
    while (!at_eof()) {
      const Token& t = take();
      if (t.is("(")) ++paren;
      if (t.is(")")) --paren;
      if (t.is(";") && paren <= 0) return;
    }
    fail_here(DiagCode::SyntaxError, "expected ';'");
  }

  // Skips one statement-shaped region: begin/end, case/endcase, a control
  // statement, or a simple statement through ';'.
  void skip_statement_region() {
    if (at_eof()) fail_here(DiagCode::SyntaxError, "unexpected end of input");
    if (at("begin")) {
      take();
      if (accept(":")) expect_name("as block label");
      while (!at("end")) {
        if (at_eof()) fail_here(DiagCode::SyntaxError, "unterminated begin block");
        skip_statement_region();
      }
      take();
      return;
    }
    if (at("case") || at("casez") || at("casex")) {
      take();
      skip_parens();
      while (!at("endcase")) {
        if (at_eof()) fail_here(DiagCode::SyntaxError, "unterminated case");
        take();
        if (toks_[pos_ - 1].is("begin")) {
          // rewind-free: nested begins are rare inside skipped regions; scan
          // for the matching end.
          int depth = 1;
          while (depth > 0) {
            if (at_eof()) fail_here(DiagCode::SyntaxError, "unterminated begin block");
            const Token& t = take();
            if (t.is("begin")) ++depth;
            if (t.is("end")) --depth;
          }
        }
      }
      take();
      return;
    }
    if (at("if")) {
      take();
      skip_parens();
      skip_statement_region();
      if (accept("else")) skip_statement_region();
      return;
    }
    if (at("for") || at("while") || at("repeat")) {
      take();
      skip_parens();
      skip_statement_region();
      return;
    }
    if (at("forever")) {
      take();
      skip_statement_region();
      return;
    }
    if (at("@")) {
      take();
      if (at("(")) skip_parens();
      else take();
      skip_statement_region();
      return;
    }
    if (at("#")) {
      take();
      if (at("(")) skip_parens();
      else take();
      skip_statement_region();
      return;
    }
    skip_to_semicolon();
  }

  void skip_until_keyword(std::string_view end_kw) {
    while (!at(end_kw)) {
      if (at_eof()) {
        fail_here(DiagCode::SyntaxError,
                  "missing '" + std::string(end_kw) + "'");
      }
      take();
    }
    take();
  }

  // ---- module structure -------------------------------------------------

  void parse_header_params() {
    if (!at("#")) return;
    take();
    expect("(", "after '#'");
    bool first = true;
    while (!at(")")) {
      if (!first) expect(",", "between parameters");
      first = false;
      accept("parameter");
      parse_range(nullptr);  // optional width on the parameter, ignored
      ParamDecl p;
      p.in_header = true;
      std::size_t start = peek().start;
      p.name = expect_name("as parameter name");
      expect("=", "after parameter name");
      p.value = parse_const_expr(&p.param_refs);
      p.span = Span{start, prev_end()};
      declare_param(std::move(p));
    }
    take();  // )
  }

  void declare_param(ParamDecl p) {
    if (param_values_.count(p.name) || declared_names_.count(p.name)) {
      fail_at(p.span.start, DiagCode::SyntaxError,
              "duplicate declaration of '" + p.name + "'");
    }
    param_values_[p.name] = p.value;
    declared_names_.insert(p.name);
    mod_.params.push_back(std::move(p));
  }

  void parse_port_list() {
    expect("(", "after module name");
    if (accept(")")) {
      expect(";", "after port list");
      return;
    }
    bool ansi = at("input") || at("output") || at("inout");
    mod_.ansi_header = ansi;
    if (ansi) {
      Direction dir = Direction::Input;
      NetKind kind = NetKind::Wire;
      Range range;
      bool first = true;
      while (true) {
        std::size_t group_start = peek().start;
        bool restated = false;
        if (at("inout")) {
          fail_here(DiagCode::UnsupportedConstruct, "inout port");
        }
        if (at("input") || at("output")) {
          dir = accept("input") ? Direction::Input : (take(), Direction::Output);
          kind = NetKind::Wire;
          range = Range{};
          restated = true;
          if (accept("reg")) kind = NetKind::Reg;
          else accept("wire");
          range = parse_range(nullptr);
        } else if (first) {
          fail_here(DiagCode::SyntaxError, "expected port direction");
        }
        PortDecl port;
        port.dir = dir;
        port.kind = kind;
        port.range = range;
        port.ansi = true;
        const Token& name_tok = peek();
        port.name = expect_name("as port name");
        port.header_name_span = name_tok.span();
        port.span = restated ? Span{group_start, name_tok.end} : name_tok.span();
        declare_port(std::move(port));
        first = false;
        if (accept(",")) continue;
        break;
      }
    } else {
      while (true) {
        PortDecl port;
        const Token& name_tok = peek();
        port.name = expect_name("as port name");
        port.ansi = false;
        port.header_name_span = name_tok.span();
        port.span = name_tok.span();
        port.dir = Direction::Input;  // until the body declaration arrives
        declare_port(std::move(port));
        if (accept(",")) continue;
        break;
      }
    }
    expect(")", "after port list");
    expect(";", "after port list");
  }

  void declare_port(PortDecl port) {
    if (declared_names_.count(port.name)) {
      fail_at(port.span.start, DiagCode::SyntaxError,
              "duplicate declaration of '" + port.name + "'");
    }
    declared_names_.insert(port.name);
    if (!mod_.ansi_header) pending_direction_.insert(port.name);
    mod_.ports.push_back(std::move(port));
  }

  PortDecl* find_port_mut(std::string_view port) {
    for (auto& p : mod_.ports) {
      if (p.name == port) return &p;
    }
    return nullptr;
  }

  void parse_body_direction_decl() {
    std::size_t start = peek().start;
    Direction dir = accept("input") ? Direction::Input : (take(), Direction::Output);
    NetKind kind = NetKind::Wire;
    if (accept("reg")) kind = NetKind::Reg;
    else accept("wire");
    std::vector<std::string> param_refs;
    Range range = parse_range(&param_refs);
    std::vector<std::string> names;
    names.push_back(expect_name("as port name"));
    while (accept(",")) names.push_back(expect_name("as port name"));
    const Token& semi = expect(";", "after port declaration");
    Span stmt_span{start, semi.end};
    for (const auto& name : names) {
      PortDecl* port = find_port_mut(name);
      if (port == nullptr) {
        fail_at(stmt_span.start, DiagCode::SyntaxError,
                "'" + name + "' is not in the module port list");
      }
      if (mod_.ansi_header || !pending_direction_.count(name)) {
        fail_at(stmt_span.start, DiagCode::SyntaxError,
                "duplicate direction declaration of '" + name + "'");
      }
      pending_direction_.erase(name);
      port->dir = dir;
      port->kind = kind;
      port->range = range;
      port->param_refs = param_refs;
      port->span = stmt_span;
      port->body_decl_spans.push_back(stmt_span);
    }
  }

  void parse_net_decl(NetKind kind) {
    std::size_t start = peek().start;
    take();  // wire | reg
    std::vector<std::string> param_refs;
    Range range = parse_range(&param_refs);

    struct Declarator {
      std::string name;
      ExprPtr init;
    };
    std::vector<Declarator> declarators;
    while (true) {
      Declarator d;
      d.name = expect_name("in net declaration");
      if (accept("=")) {
        if (kind == NetKind::Reg) {
          fail_here(DiagCode::UnsupportedConstruct,
                    "reg initializer (behaves like an initial block)");
        }
        d.init = parse_expr();
      }
      declarators.push_back(std::move(d));
      if (!accept(",")) break;
    }
    const Token& semi = expect(";", "after declaration");
    Span stmt_span{start, semi.end};

    for (auto& d : declarators) {
      if (PortDecl* port = find_port_mut(d.name)) {
        // Classic split style: `output q;` followed by `reg q;`.
        if (mod_.ansi_header) {
          fail_at(stmt_span.start, DiagCode::SyntaxError,
                  "redeclaration of ANSI port '" + d.name + "'");
        }
        if (pending_direction_.count(d.name)) {
          fail_at(stmt_span.start, DiagCode::SyntaxError,
                  "net declaration of '" + d.name + "' before its direction");
        }
        if (d.init) {
          fail_at(stmt_span.start, DiagCode::UnsupportedConstruct,
                  "initializer on port declaration");
        }
        if (range.declared && port->range.declared &&
            (range.msb != port->range.msb || range.lsb != port->range.lsb)) {
          fail_at(stmt_span.start, DiagCode::SyntaxError,
                  "conflicting range in redeclaration of '" + d.name + "'");
        }
        if (range.declared) port->range = range;
        port->kind = kind;
        port->body_decl_spans.push_back(stmt_span);
        continue;
      }
      if (declared_names_.count(d.name)) {
        fail_at(stmt_span.start, DiagCode::SyntaxError,
                "duplicate declaration of '" + d.name + "'");
      }
      declared_names_.insert(d.name);
      NetDecl net;
      net.name = d.name;
      net.kind = kind;
      net.range = range;
      net.init = std::move(d.init);
      net.span = stmt_span;
      net.param_refs = param_refs;
      mod_.decls.push_back(std::move(net));
    }
  }

  void parse_param_decl(bool local) {
    std::size_t start = peek().start;
    take();  // parameter | localparam
    parse_range(nullptr);
    std::size_t first_index = mod_.params.size();
    while (true) {
      ParamDecl p;
      p.local = local;
      p.name = expect_name("as parameter name");
      expect("=", "after parameter name");
      p.value = parse_const_expr(&p.param_refs);
      declare_param(std::move(p));
      if (!accept(",")) break;
    }
    const Token& semi = expect(";", "after parameter declaration");
    for (std::size_t i = first_index; i < mod_.params.size(); ++i) {
      mod_.params[i].span = Span{start, semi.end};
    }
  }

  void parse_always() {
    AlwaysBlock blk;
    std::size_t start = peek().start;
    take();  // always
    expect("@", "after 'always'");
    if (at("*")) {
      blk.star = true;
      blk.sens_span = peek().span();
      take();
    } else {
      expect("(", "after '@'");
      if (at("*")) {
        blk.star = true;
        blk.sens_span = peek().span();
        take();
      } else {
        std::size_t sens_start = peek().start;
        while (true) {
          SensItem item;
          std::size_t item_start = peek().start;
          if (accept("posedge")) item.edge = EdgeKind::Pos;
          else if (accept("negedge")) item.edge = EdgeKind::Neg;
          item.signal = expect_name("in sensitivity list");
          item.span = Span{item_start, prev_end()};
          blk.sens.push_back(std::move(item));
          if (accept("or") || accept(",")) continue;
          break;
        }
        blk.sens_span = Span{sens_start, prev_end()};
      }
      expect(")", "after sensitivity list");
    }
    parse_stmt_or_block(blk.body, blk.body_is_block);
    if (blk.body.empty()) {
      fail_at(start, DiagCode::SyntaxError, "always block has no statements");
    }
    blk.span = Span{start, prev_end()};
    mod_.items.push_back(std::move(blk));
  }

  void parse_continuous_assign() {
    std::size_t start = peek().start;
    take();  // assign
    while (true) {
      ContinuousAssign ca;
      ca.lhs = parse_lvalue();
      expect("=", "in continuous assignment");
      skip_delay_control();
      ca.rhs = parse_expr();
      if (at(",")) {
        // `assign a = x, b = y;` — keep statement spans disjoint by
        // rejecting the comma form rather than sharing one span.
        fail_here(DiagCode::UnsupportedConstruct,
                  "comma-separated continuous assignments");
      }
      const Token& semi = expect(";", "after assignment");
      ca.span = Span{start, semi.end};
      mod_.items.push_back(std::move(ca));
      break;
    }
  }

  void add_unsupported_item(std::string construct, std::size_t start) {
    UnsupportedItem u;
    u.construct = std::move(construct);
    u.span = Span{start, prev_end()};
    mod_.items.push_back(std::move(u));
  }

  void parse_module_shell() {
    if (at_eof()) fail_here(DiagCode::SyntaxError, "empty input");
    if (!at("module")) {
      fail_here(DiagCode::SyntaxError, "expected 'module'");
    }
    std::size_t mod_start = peek().start;
    take();
    const Token& name_tok = peek();
    mod_.name = expect_name("as module name");
    mod_.name_span = name_tok.span();
    parse_header_params();
    parse_port_list();
    mod_.header_span = Span{mod_start, prev_end()};

    while (!at("endmodule")) {
      if (at_eof()) fail_here(DiagCode::SyntaxError, "missing 'endmodule'");
      std::size_t start = peek().start;
      if (at("assign")) {
        parse_continuous_assign();
      } else if (at("always")) {
        parse_always();
      } else if (at("wire")) {
        parse_net_decl(NetKind::Wire);
      } else if (at("reg")) {
        parse_net_decl(NetKind::Reg);
      } else if (at("input") || at("output")) {
        parse_body_direction_decl();
      } else if (at("inout")) {
        fail_here(DiagCode::UnsupportedConstruct, "inout port");
      } else if (at("parameter")) {
        parse_param_decl(false);
      } else if (at("localparam")) {
        parse_param_decl(true);
      } else if (at("initial")) {
        take();
        skip_statement_region();
        add_unsupported_item("initial block", start);
      } else if (at("function")) {
        take();
        skip_until_keyword("endfunction");
        add_unsupported_item("function", start);
      } else if (at("task")) {
        take();
        skip_until_keyword("endtask");
        add_unsupported_item("task", start);
      } else if (at("generate")) {
        take();
        skip_until_keyword("endgenerate");
        add_unsupported_item("generate block", start);
      } else if (at("specify")) {
        take();
        skip_until_keyword("endspecify");
        add_unsupported_item("specify block", start);
      } else if (at("integer") || at("real") || at("time") || at("genvar") ||
                 at("event") || at("defparam")) {
        std::string kw(take().text);
        skip_to_semicolon();
        add_unsupported_item(kw + " declaration", start);
      } else if (at("signed")) {
        fail_here(DiagCode::UnsupportedConstruct, "signed declaration");
      } else if (at_ident() && !is_keyword(peek().text)) {
        // Module instantiation: `type [#(...)] instance (...);`
        take();
        if (at("#")) {
          take();
          skip_parens();
        }
        if (at_ident()) take();
        skip_to_semicolon();
        add_unsupported_item("module instantiation", start);
      } else {
        fail_here(DiagCode::SyntaxError,
                  "unexpected token '" + std::string(peek().text) + "'");
      }
    }
    const Token& endmod = take();
    mod_.span = Span{mod_start, endmod.end};
    mod_.body_span = Span{mod_.header_span.end, endmod.start};

    if (!at_eof()) {
      if (at("module")) {
        fail_here(DiagCode::MultipleModules,
                  "file contains more than one module");
      }
      fail_here(DiagCode::SyntaxError, "trailing input after 'endmodule'");
    }
  }

  // ---- resolution ------------------------------------------------------

  void resolve() {
    if (fragment_) return;
    for (const auto& name : pending_direction_) {
      fail_at(mod_.header_span.start, DiagCode::SyntaxError,
              "port '" + name + "' has no direction declaration");
    }
    for (const auto& p : mod_.ports) {
      SignalInfo s;
      s.name = p.name;
      s.width = p.width();
      s.is_port = true;
      s.dir = p.dir;
      s.kind = p.kind;
      mod_.signals.push_back(s);
    }
    for (const auto& d : mod_.decls) {
      SignalInfo s;
      s.name = d.name;
      s.width = d.width();
      s.is_port = false;
      s.kind = d.kind;
      mod_.signals.push_back(s);
    }
    for (std::size_t i = 0; i < mod_.signals.size(); ++i) {
      signal_index_[mod_.signals[i].name] = static_cast<int>(i);
    }
    for (auto& p : mod_.ports) p.sig_index = signal_index_[p.name];
    for (auto& d : mod_.decls) d.sig_index = signal_index_[d.name];

    for (auto& d : mod_.decls) {
      if (d.init) resolve_expr(*d.init);
    }
    for (auto& item : mod_.items) {
      if (auto* ca = std::get_if<ContinuousAssign>(&item)) {
        resolve_lvalue(ca->lhs);
        resolve_expr(*ca->rhs);
      } else if (auto* blk = std::get_if<AlwaysBlock>(&item)) {
        for (auto& sens : blk->sens) {
          if (!signal_index_.count(sens.signal)) {
            fail_at(sens.span.start, DiagCode::UnresolvedIdentifier,
                    "unresolved identifier '" + sens.signal + "'");
          }
        }
        for (auto& stmt : blk->body) resolve_stmt(*stmt);
      }
    }
  }

  const Range& range_of(int sig_index) const {
    static const Range scalar{};
    for (const auto& p : mod_.ports) {
      if (p.sig_index == sig_index) return p.range.declared ? p.range : scalar;
    }
    for (const auto& d : mod_.decls) {
      if (d.sig_index == sig_index) return d.range.declared ? d.range : scalar;
    }
    return scalar;
  }

  void resolve_select(std::string_view name, int sig_index, Span span,
                      int sel_msb, int sel_lsb, bool part, int& val_high,
                      int& val_low) {
    const Range& range = range_of(sig_index);
    if (!range.declared) {
      if (!(sel_msb == 0 && sel_lsb == 0 && !part)) {
        fail_at(span.start, DiagCode::SyntaxError,
                "select on scalar signal '" + std::string(name) + "'");
      }
      val_high = val_low = 0;
      return;
    }
    int lo = std::min(range.msb, range.lsb);
    int hi = std::max(range.msb, range.lsb);
    if (sel_msb < lo || sel_msb > hi || sel_lsb < lo || sel_lsb > hi) {
      fail_at(span.start, DiagCode::SyntaxError,
              "select out of range on '" + std::string(name) + "'");
    }
    int a = range.value_bit(sel_msb);
    int b = range.value_bit(sel_lsb);
    if (part && a < b) {
      fail_at(span.start, DiagCode::SyntaxError,
              "part-select direction conflicts with declaration of '" +
                  std::string(name) + "'");
    }
    val_high = std::max(a, b);
    val_low = std::min(a, b);
  }

  void resolve_lvalue(LValue& lv) {
    auto it = signal_index_.find(lv.name);
    if (it == signal_index_.end()) {
      fail_at(lv.span.start, DiagCode::UnresolvedIdentifier,
              "unresolved identifier '" + lv.name + "'");
    }
    lv.sig_index = it->second;
    if (lv.has_select()) {
      resolve_select(lv.name, lv.sig_index, lv.span, lv.sel_msb, lv.sel_lsb,
                     lv.part_select, lv.val_high, lv.val_low);
      lv.width = lv.val_high - lv.val_low + 1;
    } else {
      lv.width = mod_.signals[lv.sig_index].width;
    }
  }

  void resolve_expr(Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Ident: {
        auto pit = param_values_.find(e.name);
        if (pit != param_values_.end()) {
          e.is_const_ref = true;
          e.value = static_cast<std::uint64_t>(pit->second);
          return;
        }
        auto it = signal_index_.find(e.name);
        if (it == signal_index_.end()) {
          fail_at(e.span.start, DiagCode::UnresolvedIdentifier,
                  "unresolved identifier '" + e.name + "'");
        }
        e.sig_index = it->second;
        return;
      }
      case Expr::Kind::Select: {
        auto it = signal_index_.find(e.name);
        if (it == signal_index_.end()) {
          if (param_values_.count(e.name)) {
            fail_at(e.span.start, DiagCode::UnsupportedConstruct,
                    "select on parameter '" + e.name + "'");
          }
          fail_at(e.span.start, DiagCode::UnresolvedIdentifier,
                  "unresolved identifier '" + e.name + "'");
        }
        e.sig_index = it->second;
        resolve_select(e.name, e.sig_index, e.span, e.sel_msb, e.sel_lsb,
                       e.part_select, e.val_high, e.val_low);
        return;
      }
      default:
        for (auto& arg : e.args) resolve_expr(*arg);
        return;
    }
  }

  void resolve_stmt(Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::Blocking:
      case Stmt::Kind::Nonblocking:
        resolve_lvalue(s.lhs);
        resolve_expr(*s.rhs);
        return;
      case Stmt::Kind::If:
        resolve_expr(*s.cond);
        for (auto& st : s.then_body) resolve_stmt(*st);
        for (auto& st : s.else_body) resolve_stmt(*st);
        return;
      case Stmt::Kind::Case:
        resolve_expr(*s.case_expr);
        for (auto& arm : s.arms) {
          for (auto& label : arm.labels) resolve_expr(*label);
          for (auto& st : arm.body) resolve_stmt(*st);
        }
        return;
    }
  }

  // ---- width annotation --------------------------------------------------

  int self_width(Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Number:
        return e.self_width = e.literal_width;
      case Expr::Kind::Ident:
        if (e.is_const_ref) {
          std::int64_t v = static_cast<std::int64_t>(e.value);
          return e.self_width = v < 0 ? 64 : std::max(32, bits_needed(e.value));
        }
        return e.self_width = mod_.signals[e.sig_index].width;
      case Expr::Kind::Select:
        return e.self_width = e.val_high - e.val_low + 1;
      case Expr::Kind::Unary: {
        int w = self_width(*e.args[0]);
        switch (e.uop) {
          case UnaryOp::BitNot:
          case UnaryOp::Negate:
            return e.self_width = w;
          default:
            return e.self_width = 1;
        }
      }
      case Expr::Kind::Binary: {
        int a = self_width(*e.args[0]);
        int b = self_width(*e.args[1]);
        switch (e.bop) {
          case BinaryOp::BitAnd: case BinaryOp::BitOr: case BinaryOp::BitXor:
          case BinaryOp::Add: case BinaryOp::Sub: case BinaryOp::Mul:
            return e.self_width = std::max(a, b);
          case BinaryOp::Shl: case BinaryOp::Shr:
            return e.self_width = a;
          default:
            return e.self_width = 1;
        }
      }
      case Expr::Kind::Ternary: {
        self_width(*e.args[0]);
        int a = self_width(*e.args[1]);
        int b = self_width(*e.args[2]);
        return e.self_width = std::max(a, b);
      }
      case Expr::Kind::Concat: {
        int total = 0;
        for (auto& arg : e.args) total += self_width(*arg);
        if (total > 64) {
          fail_at(e.span.start, DiagCode::WidthOverflow,
                  "concatenation wider than 64 bits");
        }
        return e.self_width = total;
      }
      case Expr::Kind::Replicate: {
        int w = self_width(*e.args[0]);
        std::uint64_t total = e.rep_count * static_cast<std::uint64_t>(w);
        if (total > 64) {
          fail_at(e.span.start, DiagCode::WidthOverflow,
                  "replication wider than 64 bits");
        }
        return e.self_width = static_cast<int>(total);
      }
    }
    return e.self_width = 1;
  }

  void set_context(Expr& e, int ctx) {
    int w = std::max(e.self_width, ctx);
    switch (e.kind) {
      case Expr::Kind::Number:
      case Expr::Kind::Ident:
      case Expr::Kind::Select:
        e.eval_width = w;
        return;
      case Expr::Kind::Unary:
        switch (e.uop) {
          case UnaryOp::BitNot:
          case UnaryOp::Negate:
            e.eval_width = w;
            set_context(*e.args[0], w);
            return;
          default:
            e.eval_width = 1;
            set_context(*e.args[0], e.args[0]->self_width);
            return;
        }
      case Expr::Kind::Binary:
        switch (e.bop) {
          case BinaryOp::BitAnd: case BinaryOp::BitOr: case BinaryOp::BitXor:
          case BinaryOp::Add: case BinaryOp::Sub: case BinaryOp::Mul:
            e.eval_width = w;
            set_context(*e.args[0], w);
            set_context(*e.args[1], w);
            return;
          case BinaryOp::Shl: case BinaryOp::Shr:
            e.eval_width = w;
            set_context(*e.args[0], w);
            set_context(*e.args[1], e.args[1]->self_width);
            return;
          case BinaryOp::Eq: case BinaryOp::Ne: case BinaryOp::Lt:
          case BinaryOp::Le: case BinaryOp::Gt: case BinaryOp::Ge: {
            e.eval_width = 1;
            int opw = std::max(e.args[0]->self_width, e.args[1]->self_width);
            set_context(*e.args[0], opw);
            set_context(*e.args[1], opw);
            return;
          }
          case BinaryOp::LogicAnd: case BinaryOp::LogicOr:
            e.eval_width = 1;
            set_context(*e.args[0], e.args[0]->self_width);
            set_context(*e.args[1], e.args[1]->self_width);
            return;
        }
        return;
      case Expr::Kind::Ternary:
        e.eval_width = w;
        set_context(*e.args[0], e.args[0]->self_width);
        set_context(*e.args[1], w);
        set_context(*e.args[2], w);
        return;
      case Expr::Kind::Concat:
        e.eval_width = w;
        for (auto& arg : e.args) set_context(*arg, arg->self_width);
        return;
      case Expr::Kind::Replicate:
        e.eval_width = w;
        set_context(*e.args[0], e.args[0]->self_width);
        return;
    }
  }

  void annotate_rhs(Expr& e, int lhs_width) {
    self_width(e);
    set_context(e, lhs_width);
  }

  void annotate_condition(Expr& e) {
    self_width(e);
    set_context(e, e.self_width);
  }

  void annotate_stmt(Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::Blocking:
      case Stmt::Kind::Nonblocking:
        annotate_rhs(*s.rhs, s.lhs.width);
        return;
      case Stmt::Kind::If:
        annotate_condition(*s.cond);
        for (auto& st : s.then_body) annotate_stmt(*st);
        for (auto& st : s.else_body) annotate_stmt(*st);
        return;
      case Stmt::Kind::Case: {
        int w = self_width(*s.case_expr);
        for (auto& arm : s.arms) {
          for (auto& label : arm.labels) w = std::max(w, self_width(*label));
        }
        set_context(*s.case_expr, w);
        for (auto& arm : s.arms) {
          for (auto& label : arm.labels) set_context(*label, w);
          for (auto& st : arm.body) annotate_stmt(*st);
        }
        return;
      }
    }
  }

  void annotate_widths() {
    if (fragment_) return;
    for (auto& d : mod_.decls) {
      if (d.init) annotate_rhs(*d.init, d.width());
    }
    for (auto& item : mod_.items) {
      if (auto* ca = std::get_if<ContinuousAssign>(&item)) {
        annotate_rhs(*ca->rhs, ca->lhs.width);
      } else if (auto* blk = std::get_if<AlwaysBlock>(&item)) {
        for (auto& stmt : blk->body) annotate_stmt(*stmt);
      }
    }
  }

  const SourceText& src_;
  bool fragment_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  ModuleAst mod_;
  std::map<std::string, std::int64_t, std::less<>> param_values_;
  std::set<std::string, std::less<>> declared_names_;
  std::set<std::string> pending_direction_;
  std::map<std::string, int, std::less<>> signal_index_;
};

}  // namespace

ModuleAst parse_module(const SourceText& src) {
  Parser parser(src);
  return parser.parse();
}

ExprPtr parse_expr_fragment(std::string_view text) {
  SourceText src = normalize_source(text, "<fragment>");
  Parser parser(src, /*fragment=*/true);
  return parser.parse_expr_only();
}

std::vector<StmtPtr> parse_stmt_fragment(std::string_view text) {
  SourceText src = normalize_source(text, "<fragment>");
  Parser parser(src, /*fragment=*/true);
  return parser.parse_stmts_only();
}

std::vector<Diagnostic> check_source(const SourceText& src) {
  try {
    ModuleAst ast = parse_module(src);
    return supported_subset_check(ast);
  } catch (const Error& e) {
    if (e.diagnostic()) return {*e.diagnostic()};
    return {Diagnostic{DiagCode::SyntaxError, src.origin, 1, 1, e.what()}};
  }
}

}  // namespace salv
