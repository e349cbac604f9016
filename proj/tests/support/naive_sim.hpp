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

#ifndef SALVKIT_TESTS_NAIVE_SIM_HPP
#define SALVKIT_TESTS_NAIVE_SIM_HPP

#include "salvkit/ast.hpp"
#include "salvkit/simulator.hpp"
#include "salvkit/stimulus.hpp"

namespace salv::testing {

// Deliberately artless interpreter used as the simulator oracle: no
// elaboration, no dependency ordering, no width annotations reused. Every
// cycle it sweeps all combinational items in lexical order a fixed 128
// times, samples outputs, then fires the edge blocks with a nonblocking
// buffer. Expression widths are recomputed on the fly from the declaration
// table. Only meaningful for modules that pass the subset check.
SimTrace naive_run(const ModuleAst& ast, const StimulusSet& stimuli);

}  // namespace salv::testing

#endif  // SALVKIT_TESTS_NAIVE_SIM_HPP
