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

#ifndef SALVKIT_STIMULUS_HPP
#define SALVKIT_STIMULUS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "salvkit/ast.hpp"

namespace salv {

enum class PortRole { Clock, Reset, Data };

struct PortClass {
  std::string signal;
  int width = 1;
  PortRole role = PortRole::Data;
  bool active_low = false;  // reset only
};

// Deterministic input vectors for one module interface. The clock has no
// column (one implicit rising edge per vector); the reset column follows the
// assert-two-cycles-then-deassert schedule.
struct StimulusSet {
  std::uint64_t seed = 0;
  int n = 0;
  std::vector<PortClass> classes;  // port declaration order, inputs only
  std::map<std::string, std::vector<std::uint64_t>> columns;
};

// Header-driven classification of input ports:
//  - reset iff the lowercased name is one of
//      {rst, reset, rst_n, resetn, nrst, areset, aresetn, i_rst};
//    active-low iff the name is one of {rst_n, resetn, nrst, aresetn};
//  - clock iff the lowercased name is one of {clk, clock, i_clk, clk_i} OR the
//    port is 1 bit wide and appears under posedge/negedge in some always
//    block;
//  - data otherwise.
// At most one clock and one reset: the first match in port declaration order
// wins a role, later matches fall back to data.
std::vector<PortClass> classify_ports(const ModuleAst& ast);

// N vectors from xoshiro256** streams. Each data column is keyed by
// (seed XOR fnv1a64(port name)) run through splitmix64 seeding, so columns
// are independent of port ordering and prefix-stable in n.
StimulusSet generate_stimuli(const std::vector<PortClass>& classes, int n,
                             std::uint64_t seed);

// All 2^B input combinations for modules whose data inputs total B <= 20
// bits. Vector index i feeds its low-order bits to the first data port in
// declaration order, the next bits to the second, and so on. Throws
// Error(DomainError) when B > 20.
StimulusSet exhaustive_stimuli(const std::vector<PortClass>& classes);

}  // namespace salv

#endif  // SALVKIT_STIMULUS_HPP
