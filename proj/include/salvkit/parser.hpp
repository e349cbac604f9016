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

#ifndef SALVKIT_PARSER_HPP
#define SALVKIT_PARSER_HPP

#include <string_view>
#include <vector>

#include "salvkit/ast.hpp"
#include "salvkit/diagnostics.hpp"
#include "salvkit/source.hpp"

namespace salv {

// Parses one module definition into a span-faithful AST. Constructs the
// parser can skip with balanced scanning (initial blocks, instantiations,
// function/task/generate bodies, `#delay`, ...) are tolerated and surface
// later through supported_subset_check; everything else throws Error with an
// E-coded diagnostic:
//   E001 SyntaxError, E002 UnsupportedConstruct, E003 UnresolvedIdentifier,
//   E004 WidthOverflow, E005 MultipleModules.
ModuleAst parse_module(const SourceText& src);

// Diagnostics (empty iff the module stays inside the simulatable subset):
// tolerated constructs, always-block shape violations, incomplete sensitivity
// lists, wildcard misuse, multiple drivers, procedural/continuous assignment
// kind mismatches. Never throws.
std::vector<Diagnostic> supported_subset_check(const ModuleAst& ast);

// parse_module + supported_subset_check with parse failures folded into the
// returned list. Convenience for CLI-style checking.
std::vector<Diagnostic> check_source(const SourceText& src);

// Fragment entry points (tooling/tests): structural parse only, no name
// resolution or width annotation.
ExprPtr parse_expr_fragment(std::string_view text);
std::vector<StmtPtr> parse_stmt_fragment(std::string_view text);

}  // namespace salv

#endif  // SALVKIT_PARSER_HPP
