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

#include "naive_sim.hpp"

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace salv::testing {

namespace {

std::uint64_t maskw(int w) {
  return w >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << w) - 1);
}

struct NaiveState {
  const ModuleAst& ast;
  std::map<std::string, std::uint64_t> value;
  std::map<std::string, int> width;

  explicit NaiveState(const ModuleAst& a) : ast(a) {
    for (const auto& s : a.signals) {
      value[s.name] = 0;
      width[s.name] = s.width;
    }
  }

  // Self-determined width, recomputed on every visit.
  int self_w(const Expr& e) const {
    switch (e.kind) {
      case Expr::Kind::Number:
        return e.literal_width;
      case Expr::Kind::Ident:
        if (e.is_const_ref) {
          std::int64_t v = static_cast<std::int64_t>(e.value);
          if (v < 0) return 64;
          int bits = 1;
          while (bits < 64 && (e.value >> bits) != 0) ++bits;
          return bits < 32 ? 32 : bits;
        }
        return width.at(e.name);
      case Expr::Kind::Select:
        return e.part_select ? e.val_high - e.val_low + 1 : 1;
      case Expr::Kind::Unary:
        if (e.uop == UnaryOp::BitNot || e.uop == UnaryOp::Negate) {
          return self_w(*e.args[0]);
        }
        return 1;
      case Expr::Kind::Binary:
        switch (e.bop) {
          case BinaryOp::BitAnd: case BinaryOp::BitOr: case BinaryOp::BitXor:
          case BinaryOp::Add: case BinaryOp::Sub: case BinaryOp::Mul:
            return std::max(self_w(*e.args[0]), self_w(*e.args[1]));
          case BinaryOp::Shl: case BinaryOp::Shr:
            return self_w(*e.args[0]);
          default:
            return 1;
        }
      case Expr::Kind::Ternary:
        return std::max(self_w(*e.args[1]), self_w(*e.args[2]));
      case Expr::Kind::Concat: {
        int total = 0;
        for (const auto& a : e.args) total += self_w(*a);
        return total;
      }
      case Expr::Kind::Replicate:
        return static_cast<int>(e.rep_count) * self_w(*e.args[0]);
    }
    return 1;
  }

  // Evaluate under an assignment/operation context width.
  std::uint64_t ev(const Expr& e, int ctx) const {
    int w = std::max(self_w(e), ctx);
    std::uint64_t m = maskw(w);
    switch (e.kind) {
      case Expr::Kind::Number:
        return e.value & m;
      case Expr::Kind::Ident:
        return e.is_const_ref ? (e.value & m) : value.at(e.name);
      case Expr::Kind::Select:
        return (value.at(e.name) >> e.val_low) &
               maskw(e.val_high - e.val_low + 1);
      case Expr::Kind::Unary: {
        switch (e.uop) {
          case UnaryOp::BitNot: return ~ev(*e.args[0], w) & m;
          case UnaryOp::Negate: return (0 - ev(*e.args[0], w)) & m;
          case UnaryOp::LogicNot: return ev(*e.args[0], 0) == 0;
          case UnaryOp::RedAnd: {
            int aw = self_w(*e.args[0]);
            return ev(*e.args[0], 0) == maskw(aw);
          }
          case UnaryOp::RedOr: return ev(*e.args[0], 0) != 0;
          case UnaryOp::RedXor: {
            std::uint64_t v = ev(*e.args[0], 0);
            int ones = 0;
            while (v) {
              ones ^= static_cast<int>(v & 1);
              v >>= 1;
            }
            return static_cast<std::uint64_t>(ones);
          }
        }
        return 0;
      }
      case Expr::Kind::Binary: {
        switch (e.bop) {
          case BinaryOp::BitAnd: return (ev(*e.args[0], w) & ev(*e.args[1], w)) & m;
          case BinaryOp::BitOr: return (ev(*e.args[0], w) | ev(*e.args[1], w)) & m;
          case BinaryOp::BitXor: return (ev(*e.args[0], w) ^ ev(*e.args[1], w)) & m;
          case BinaryOp::Add: return (ev(*e.args[0], w) + ev(*e.args[1], w)) & m;
          case BinaryOp::Sub: return (ev(*e.args[0], w) - ev(*e.args[1], w)) & m;
          case BinaryOp::Mul: return (ev(*e.args[0], w) * ev(*e.args[1], w)) & m;
          case BinaryOp::Shl: {
            std::uint64_t count = ev(*e.args[1], 0);
            return count >= 64 ? 0 : (ev(*e.args[0], w) << count) & m;
          }
          case BinaryOp::Shr: {
            std::uint64_t count = ev(*e.args[1], 0);
            return count >= 64 ? 0 : ev(*e.args[0], w) >> count;
          }
          case BinaryOp::Eq: case BinaryOp::Ne: case BinaryOp::Lt:
          case BinaryOp::Le: case BinaryOp::Gt: case BinaryOp::Ge: {
            int ow = std::max(self_w(*e.args[0]), self_w(*e.args[1]));
            std::uint64_t a = ev(*e.args[0], ow);
            std::uint64_t b = ev(*e.args[1], ow);
            switch (e.bop) {
              case BinaryOp::Eq: return a == b;
              case BinaryOp::Ne: return a != b;
              case BinaryOp::Lt: return a < b;
              case BinaryOp::Le: return a <= b;
              case BinaryOp::Gt: return a > b;
              default: return a >= b;
            }
          }
          case BinaryOp::LogicAnd:
            return ev(*e.args[0], 0) != 0 && ev(*e.args[1], 0) != 0;
          case BinaryOp::LogicOr:
            return ev(*e.args[0], 0) != 0 || ev(*e.args[1], 0) != 0;
        }
        return 0;
      }
      case Expr::Kind::Ternary:
        return ev(*e.args[0], 0) != 0 ? ev(*e.args[1], w) : ev(*e.args[2], w);
      case Expr::Kind::Concat: {
        std::uint64_t v = 0;
        for (const auto& a : e.args) {
          int aw = self_w(*a);
          v = (v << aw) | ev(*a, 0);
        }
        return v & m;
      }
      case Expr::Kind::Replicate: {
        int aw = self_w(*e.args[0]);
        std::uint64_t part = ev(*e.args[0], 0);
        std::uint64_t v = 0;
        for (std::uint64_t i = 0; i < e.rep_count; ++i) v = (v << aw) | part;
        return v & m;
      }
    }
    return 0;
  }

  void store(const LValue& lv, std::uint64_t v) {
    if (lv.has_select()) {
      int fw = lv.val_high - lv.val_low + 1;
      std::uint64_t field = maskw(fw);
      std::uint64_t old = value.at(lv.name);
      value[lv.name] =
          (old & ~(field << lv.val_low)) | ((v & field) << lv.val_low);
    } else {
      value[lv.name] = v & maskw(width.at(lv.name));
    }
  }
};

struct Deferred {
  LValue lv;
  std::uint64_t v;
};

void run_stmt(NaiveState& st, const Stmt& s, std::vector<Deferred>* nb) {
  switch (s.kind) {
    case Stmt::Kind::Blocking:
      st.store(s.lhs, st.ev(*s.rhs, s.lhs.width));
      return;
    case Stmt::Kind::Nonblocking: {
      std::uint64_t v = st.ev(*s.rhs, s.lhs.width);
      if (nb != nullptr) {
        Deferred d;
        d.lv = s.lhs;
        d.lv.name = s.lhs.name;
        d.v = v;
        nb->push_back(std::move(d));
      } else {
        st.store(s.lhs, v);
      }
      return;
    }
    case Stmt::Kind::If: {
      const auto& body = st.ev(*s.cond, 0) != 0 ? s.then_body : s.else_body;
      for (const auto& inner : body) run_stmt(st, *inner, nb);
      return;
    }
    case Stmt::Kind::Case: {
      int w = st.self_w(*s.case_expr);
      for (const auto& arm : s.arms) {
        for (const auto& label : arm.labels) w = std::max(w, st.self_w(*label));
      }
      std::uint64_t sel = st.ev(*s.case_expr, w);
      const CaseArm* hit = nullptr;
      const CaseArm* dflt = nullptr;
      for (const auto& arm : s.arms) {
        if (arm.is_default) {
          if (dflt == nullptr) dflt = &arm;
          continue;
        }
        for (const auto& label : arm.labels) {
          std::uint64_t lv = st.ev(*label, w);
          std::uint64_t care = ~std::uint64_t{0};
          if (s.is_casez && label->kind == Expr::Kind::Number) {
            care = ~label->wildcard;
          }
          if (((sel ^ lv) & care) == 0) {
            hit = &arm;
            break;
          }
        }
        if (hit) break;
      }
      if (hit == nullptr) hit = dflt;
      if (hit == nullptr) return;
      for (const auto& inner : hit->body) run_stmt(st, *inner, nb);
      return;
    }
  }
}

bool is_edge_block(const AlwaysBlock& blk) {
  for (const auto& s : blk.sens) {
    if (s.edge != EdgeKind::Level) return true;
  }
  return false;
}

}  // namespace

SimTrace naive_run(const ModuleAst& ast, const StimulusSet& stimuli) {
  NaiveState st(ast);
  SimTrace trace;
  trace.cycles = stimuli.n;

  for (int cycle = 0; cycle < stimuli.n; ++cycle) {
    for (const auto& [name, col] : stimuli.columns) {
      st.value[name] = col[cycle];
    }
    for (int sweep = 0; sweep < 128; ++sweep) {
      for (const auto& d : ast.decls) {
        if (d.init) {
          st.value[d.name] = st.ev(*d.init, d.width()) & maskw(d.width());
        }
      }
      for (const auto& item : ast.items) {
        if (const auto* ca = std::get_if<ContinuousAssign>(&item)) {
          st.store(ca->lhs, st.ev(*ca->rhs, ca->lhs.width));
        } else if (const auto* blk = std::get_if<AlwaysBlock>(&item)) {
          if (is_edge_block(*blk)) continue;
          std::vector<Deferred> nb;
          for (const auto& s : blk->body) run_stmt(st, *s, &nb);
          for (const auto& d : nb) st.store(d.lv, d.v);
        }
      }
    }
    for (const auto& p : ast.ports) {
      if (p.dir == Direction::Output) {
        trace.outputs[p.name].push_back(st.value.at(p.name));
      }
    }
    std::vector<Deferred> nb;
    for (const auto& item : ast.items) {
      const auto* blk = std::get_if<AlwaysBlock>(&item);
      if (blk == nullptr || !is_edge_block(*blk)) continue;
      for (const auto& s : blk->body) run_stmt(st, *s, &nb);
    }
    for (const auto& d : nb) st.store(d.lv, d.v);
  }
  return trace;
}

}  // namespace salv::testing
