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

#include "salvkit/stimulus.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <variant>

#include "salvkit/prng.hpp"

namespace salv {

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool is_reset_name(const std::string& lower) {
  static const std::set<std::string> names = {
      "rst", "reset", "rst_n", "resetn", "nrst", "areset", "aresetn", "i_rst"};
  return names.count(lower) > 0;
}

bool is_active_low_reset_name(const std::string& lower) {
  static const std::set<std::string> names = {"rst_n", "resetn", "nrst",
                                              "aresetn"};
  return names.count(lower) > 0;
}

bool is_clock_name(const std::string& lower) {
  static const std::set<std::string> names = {"clk", "clock", "i_clk", "clk_i"};
  return names.count(lower) > 0;
}

std::set<std::string> edge_signals(const ModuleAst& ast) {
  std::set<std::string> out;
  for (const auto& item : ast.items) {
    const auto* blk = std::get_if<AlwaysBlock>(&item);
    if (blk == nullptr) continue;
    for (const auto& sens : blk->sens) {
      if (sens.edge != EdgeKind::Level) out.insert(sens.signal);
    }
  }
  return out;
}

std::uint64_t mask_for(int width) {
  return width >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
}

}  // namespace

std::vector<PortClass> classify_ports(const ModuleAst& ast) {
  std::set<std::string> edges = edge_signals(ast);
  std::vector<PortClass> classes;
  for (const auto& p : ast.ports) {
    if (p.dir != Direction::Input) continue;
    PortClass pc;
    pc.signal = p.name;
    pc.width = p.width();
    pc.role = PortRole::Data;
    classes.push_back(std::move(pc));
  }

  // First reset: earliest input whose name matches the reset table.
  bool have_reset = false;
  for (auto& pc : classes) {
    std::string lower = lowercase(pc.signal);
    if (!have_reset && is_reset_name(lower)) {
      pc.role = PortRole::Reset;
      pc.active_low = is_active_low_reset_name(lower);
      have_reset = true;
    }
  }
  // Then the clock. Edge usage outranks a clock-ish name so the
  // classification always agrees with the sensitivity lists; within each
  // rule, earliest port wins.
  bool have_clock = false;
  for (auto& pc : classes) {
    if (pc.role != PortRole::Data) continue;
    if (edges.count(pc.signal) && pc.width == 1) {
      pc.role = PortRole::Clock;
      have_clock = true;
      break;
    }
  }
  if (!have_clock) {
    for (auto& pc : classes) {
      if (pc.role != PortRole::Data) continue;
      if (is_clock_name(lowercase(pc.signal))) {
        pc.role = PortRole::Clock;
        break;
      }
    }
  }
  return classes;
}

StimulusSet generate_stimuli(const std::vector<PortClass>& classes, int n,
                             std::uint64_t seed) {
  StimulusSet set;
  set.seed = seed;
  set.n = n;
  set.classes = classes;
  for (const auto& pc : classes) {
    switch (pc.role) {
      case PortRole::Clock:
        break;  // implicit edge per cycle
      case PortRole::Reset: {
        std::uint64_t asserted = pc.active_low ? 0 : 1;
        std::vector<std::uint64_t> col(static_cast<std::size_t>(n),
                                       asserted ^ 1);
        for (int i = 0; i < std::min(n, 2); ++i) col[i] = asserted;
        set.columns[pc.signal] = std::move(col);
        break;
      }
      case PortRole::Data: {
        Xoshiro256ss rng(seed ^ fnv1a64(pc.signal));
        std::vector<std::uint64_t> col;
        col.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) col.push_back(rng.next_bits(pc.width));
        set.columns[pc.signal] = std::move(col);
        break;
      }
    }
  }
  return set;
}

StimulusSet exhaustive_stimuli(const std::vector<PortClass>& classes) {
  int total_bits = 0;
  for (const auto& pc : classes) {
    if (pc.role == PortRole::Data) total_bits += pc.width;
  }
  if (total_bits > 20) {
    throw Error(ErrorKind::DomainError,
                "exhaustive mode needs <= 20 data input bits, module has " +
                    std::to_string(total_bits));
  }
  StimulusSet set;
  set.seed = 0;
  set.n = 1 << total_bits;
  set.classes = classes;
  for (const auto& pc : classes) {
    if (pc.role == PortRole::Reset) {
      std::uint64_t asserted = pc.active_low ? 0 : 1;
      std::vector<std::uint64_t> col(static_cast<std::size_t>(set.n),
                                     asserted ^ 1);
      for (int i = 0; i < std::min(set.n, 2); ++i) col[i] = asserted;
      set.columns[pc.signal] = std::move(col);
    }
  }
  int shift = 0;
  for (const auto& pc : classes) {
    if (pc.role != PortRole::Data) continue;
    std::vector<std::uint64_t> col;
    col.reserve(static_cast<std::size_t>(set.n));
    for (int i = 0; i < set.n; ++i) {
      col.push_back((static_cast<std::uint64_t>(i) >> shift) & mask_for(pc.width));
    }
    set.columns[pc.signal] = std::move(col);
    shift += pc.width;
  }
  return set;
}

}  // namespace salv
