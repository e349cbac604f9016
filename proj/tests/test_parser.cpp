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

#include <doctest.h>

#include <cctype>
#include <variant>

#include "fuzz_modules.hpp"
#include "test_util.hpp"

using namespace salv;
using namespace salv::testing;

namespace {

ErrorKind parse_error_kind(const std::string& text) {
  try {
    parse_text(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected a parse error");
  return ErrorKind::SyntaxError;
}

}  // namespace

TEST_CASE("minimal continuous assign module") {
  ModuleAst ast = parse_text("module m(input a, output b); assign b = a; endmodule");
  CHECK(ast.name == "m");
  REQUIRE(ast.ports.size() == 2);
  CHECK(ast.ports[0].dir == Direction::Input);
  CHECK(ast.ports[1].dir == Direction::Output);
  REQUIRE(ast.items.size() == 1);
  const auto* ca = std::get_if<ContinuousAssign>(&ast.items[0]);
  REQUIRE(ca != nullptr);
  CHECK(ca->lhs.name == "b");
  CHECK(ca->rhs->kind == Expr::Kind::Ident);
  CHECK(ca->rhs->name == "a");
}

TEST_CASE("edge-triggered register parses to one always block") {
  ModuleAst ast = parse_text(
      "module m(input clk, input d, output reg q); "
      "always @(posedge clk) q <= d; endmodule");
  REQUIRE(ast.items.size() == 1);
  const auto* blk = std::get_if<AlwaysBlock>(&ast.items[0]);
  REQUIRE(blk != nullptr);
  REQUIRE(blk->sens.size() == 1);
  CHECK(blk->sens[0].edge == EdgeKind::Pos);
  CHECK(blk->sens[0].signal == "clk");
  REQUIRE(blk->body.size() == 1);
  CHECK(blk->body[0]->kind == Stmt::Kind::Nonblocking);
}

TEST_CASE("frontend error taxonomy") {
  CHECK(parse_error_kind("module m(input a, output b); assign b = c; endmodule") ==
        ErrorKind::UnresolvedIdentifier);
  CHECK(parse_error_kind("module m(input a); endmodule module n(); endmodule") ==
        ErrorKind::MultipleModules);
  CHECK(parse_error_kind("module m(input [70:0] a, output b); assign b = a[0]; endmodule") ==
        ErrorKind::WidthOverflow);
  CHECK(parse_error_kind("module m(inout a); endmodule") ==
        ErrorKind::UnsupportedConstruct);
  CHECK(parse_error_kind("`define X 1\nmodule m(); endmodule") ==
        ErrorKind::UnsupportedConstruct);
  CHECK(parse_error_kind("module m(input a, output b); assign b = a +; endmodule") ==
        ErrorKind::SyntaxError);
  CHECK(parse_error_kind("module m(input a, output b); assign b = a / a; endmodule") ==
        ErrorKind::UnsupportedConstruct);
  CHECK(parse_error_kind("module m(input a, output b); assign {b} = a; endmodule") ==
        ErrorKind::UnsupportedConstruct);
  CHECK(parse_error_kind("module m(input [7:0] a, output b); assign b = a[9]; endmodule") ==
        ErrorKind::SyntaxError);
}

TEST_CASE("parse errors carry line and column") {
  try {
    parse_text("module m(input a,\n output b);\n assign b = c;\nendmodule", "x.v");
    FAIL("expected error");
  } catch (const Error& e) {
    REQUIRE(e.diagnostic().has_value());
    CHECK(e.diagnostic()->line == 3);
    CHECK(e.diagnostic()->code == DiagCode::UnresolvedIdentifier);
    CHECK(e.diagnostic()->origin == "x.v");
  }
}

TEST_CASE("subset check accepts a combinational mux") {
  ModuleAst ast = parse_text(
      "module mux(input s, input [3:0] a, input [3:0] b, output reg [3:0] y);\n"
      "always @(*) begin if (s) y = a; else y = b; end\nendmodule");
  CHECK(supported_subset_check(ast).empty());
}

TEST_CASE("subset diagnostics name the construct") {
  auto diags_of = [](const std::string& text) {
    return supported_subset_check(parse_text(text));
  };

  auto d1 = diags_of(
      "module m(input a, output b); assign b = a; initial b = 1; endmodule");
  REQUIRE(d1.size() == 1);
  CHECK(d1[0].message == "unsupported construct: initial block");
  CHECK(d1[0].code == DiagCode::UnsupportedConstruct);

  auto d2 = diags_of(
      "module m(input a, output b); sub u0(.x(a), .y(b)); endmodule");
  REQUIRE(d2.size() == 1);
  CHECK(d2[0].message == "unsupported construct: module instantiation");

  auto d3 = diags_of(
      "module m(input a, input b, output reg y);\n"
      "always @(a) y = a & b;\nendmodule");
  REQUIRE(d3.size() == 1);
  CHECK(d3[0].message == doctest::Contains("incomplete sensitivity"));

  auto d4 = diags_of(
      "module m(input [1:0] s, input a, output reg y);\n"
      "always @(*) casex (s) 2'b0?: y = a; default: y = 0; endcase\nendmodule");
  CHECK(!d4.empty());
  CHECK(d4[0].message == doctest::Contains("casex"));

  auto d5 = diags_of(
      "module m(input a, output b, output c);\n"
      "assign b = a; assign b = ~a; assign c = a;\nendmodule");
  REQUIRE(d5.size() == 1);
  CHECK(d5[0].message == doctest::Contains("multiple drivers"));

  auto d6 = diags_of("module m(input a, output b); assign a = b; endmodule");
  CHECK(!d6.empty());
  CHECK(d6[0].message == doctest::Contains("assignment to input"));

  auto d7 = diags_of(
      "module m(input a, output b, output reg c);\n"
      "always @(*) b = a; assign c = a;\nendmodule");
  REQUIRE(d7.size() == 2);
  CHECK(d7[0].message == doctest::Contains("procedural assignment to wire"));
  CHECK(d7[1].message == doctest::Contains("continuous assignment to reg"));

  auto d8 = diags_of(
      "module m(input [1:0] s, output b); assign b = s == 2'b1?; endmodule");
  CHECK(!d8.empty());
  CHECK(d8[0].message == doctest::Contains("wildcard"));
}

TEST_CASE("disjoint part-select drivers are a single driver per bit") {
  ModuleAst ast = parse_text(
      "module m(input a, input b, output [1:0] y);\n"
      "assign y[0] = a; assign y[1] = b;\nendmodule");
  CHECK(supported_subset_check(ast).empty());
}

TEST_CASE("check_source folds parse failures into the diagnostic list") {
  auto diags = check_source(
      normalize_source("module m(input a, output b); assign b = c; endmodule", "z.v"));
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].code == DiagCode::UnresolvedIdentifier);
  CHECK(diags[0].format() == doctest::Contains("z.v:"));
}

TEST_CASE("non-ANSI headers with split direction and reg declarations") {
  ModuleAst ast = parse_text(
      "module m(clk, d, q);\n"
      "input clk;\ninput [3:0] d;\noutput [3:0] q;\nreg [3:0] q;\n"
      "always @(posedge clk) q <= d;\nendmodule");
  CHECK_FALSE(ast.ansi_header);
  const PortDecl* q = ast.find_port("q");
  REQUIRE(q != nullptr);
  CHECK(q->dir == Direction::Output);
  CHECK(q->kind == NetKind::Reg);
  CHECK(q->width() == 4);
  CHECK(q->body_decl_spans.size() == 2);
  CHECK(supported_subset_check(ast).empty());
}

TEST_CASE("parameters substitute in ranges, selects, and expressions") {
  ModuleAst ast = parse_text(
      "module m #(parameter W = 8) (input [W-1:0] a, output [W-1:0] y);\n"
      "localparam HALF = W / 1;\n"
      "assign y = a + HALF;\nendmodule");
  CHECK(ast.find_port("a")->width() == 8);
  REQUIRE(ast.params.size() == 2);
  CHECK(ast.params[1].value == 8);
}

TEST_CASE("literals: bases, sizing, underscores, wildcards") {
  ModuleAst ast = parse_text(
      "module m(input [7:0] a, output [7:0] y);\n"
      "assign y = a + 8'b1010_1010 + 8'hff + 8'o17 + 'd9 + 12;\nendmodule");
  CHECK(supported_subset_check(ast).empty());
  CHECK_THROWS_AS(parse_text("module m(output y); assign y = 1'bx; endmodule"),
                  Error);
  CHECK(parse_error_kind("module m(output y); assign y = 1'sb1; endmodule") ==
        ErrorKind::UnsupportedConstruct);
}

TEST_CASE("span fidelity: statement and expression spans re-parse equal") {
  const std::string text =
      "module spans(input clk, input [3:0] a, input [3:0] b, input s,\n"
      "             output reg [3:0] y, output [3:0] z);\n"
      "  wire [3:0] t = a & ~b;  // comment inside\n"
      "  assign z = s ? (a + b) : {2{b[1:0]}};\n"
      "  always @(posedge clk) begin\n"
      "    if (s && a[0]) y <= t ^ b;\n"
      "    else case (a[1:0])\n"
      "      2'd0: y <= 4'h1;\n"
      "      2'd1, 2'd2: y <= b;\n"
      "      default: y <= 4'b0;\n"
      "    endcase\n"
      "  end\n"
      "endmodule\n";
  ModuleAst ast = parse_text(text);
  const std::string& src = ast.src.text;

  // Every procedural statement re-parses to a structurally equal node.
  std::vector<const Stmt*> stack;
  for (const auto& item : ast.items) {
    const auto* blk = std::get_if<AlwaysBlock>(&item);
    if (blk == nullptr) continue;
    for (const auto& s : blk->body) stack.push_back(s.get());
  }
  int checked = 0;
  while (!stack.empty()) {
    const Stmt* s = stack.back();
    stack.pop_back();
    auto reparsed = parse_stmt_fragment(span_text(src, s->span));
    REQUIRE(reparsed.size() == 1);
    CHECK(stmt_equal(*reparsed[0], *s));
    ++checked;
    for (const auto& inner : s->then_body) stack.push_back(inner.get());
    for (const auto& inner : s->else_body) stack.push_back(inner.get());
    if (s->kind == Stmt::Kind::Case) {
      for (const auto& arm : s->arms) {
        for (const auto& inner : arm.body) stack.push_back(inner.get());
      }
    }
  }
  CHECK(checked >= 5);

  // Expression spans re-parse equal too.
  for (const auto& item : ast.items) {
    if (const auto* ca = std::get_if<ContinuousAssign>(&item)) {
      ExprPtr again = parse_expr_fragment(span_text(src, ca->rhs->span));
      CHECK(expr_equal(*again, *ca->rhs));
    }
  }
}

TEST_CASE("round trip: retained spans cover every non-trivia byte") {
  Xoshiro256ss rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    FuzzModule fm = generate_fuzz_module(rng);
    ModuleAst ast = parse_text(fm.text);
    const std::string& src = ast.src.text;

    std::vector<bool> covered(src.size(), false);
    auto mark = [&](Span s) {
      for (std::size_t i = s.start; i < s.end; ++i) covered[i] = true;
    };
    mark(ast.header_span);
    for (const auto& item : ast.items) mark(item_span(item));
    for (const auto& d : ast.decls) mark(d.span);
    for (const auto& p : ast.params) mark(p.span);
    for (const auto& p : ast.ports) {
      for (Span s : p.body_decl_spans) mark(s);
    }

    // Skip whitespace, comments, and the closing endmodule.
    std::size_t i = ast.header_span.end;
    std::size_t body_end = ast.body_span.end;
    while (i < body_end) {
      if (covered[i]) {
        ++i;
        continue;
      }
      char c = src[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      if (c == '/' && i + 1 < body_end && src[i + 1] == '/') {
        while (i < body_end && src[i] != '\n') ++i;
        continue;
      }
      if (c == '/' && i + 1 < body_end && src[i + 1] == '*') {
        while (i + 1 < body_end && !(src[i] == '*' && src[i + 1] == '/')) ++i;
        i += 2;
        continue;
      }
      CAPTURE(fm.text);
      CAPTURE(i);
      FAIL_CHECK("uncovered non-trivia byte in module body");
      break;
    }
  }
}

TEST_CASE("parser determinism on fuzz modules") {
  Xoshiro256ss rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    FuzzModule fm = generate_fuzz_module(rng);
    ModuleAst a = parse_text(fm.text);
    ModuleAst b = parse_text(fm.text);
    REQUIRE(a.items.size() == b.items.size());
    CHECK(a.span == b.span);
    for (std::size_t i = 0; i < a.items.size(); ++i) {
      CHECK(item_span(a.items[i]) == item_span(b.items[i]));
      const auto* ba = std::get_if<AlwaysBlock>(&a.items[i]);
      const auto* bb = std::get_if<AlwaysBlock>(&b.items[i]);
      if (ba != nullptr) {
        REQUIRE(bb != nullptr);
        CHECK(stmt_list_equal(ba->body, bb->body));
      }
    }
  }
}
