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

#include <set>

#include "test_util.hpp"

using namespace salv;
using namespace salv::testing;

namespace {

const PortClass* find_class(const std::vector<PortClass>& classes,
                            const std::string& name) {
  for (const auto& pc : classes) {
    if (pc.signal == name) return &pc;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("clock, active-low reset, and data roles from the header") {
  ModuleAst ast = parse_text(
      "module m(input clk, input rst_n, input [3:0] d, output reg [3:0] q);\n"
      "always @(posedge clk or negedge rst_n) begin\n"
      "  if (!rst_n) q <= 0; else q <= d;\nend\nendmodule");
  auto classes = classify_ports(ast);
  REQUIRE(classes.size() == 3);
  CHECK(find_class(classes, "clk")->role == PortRole::Clock);
  CHECK(find_class(classes, "rst_n")->role == PortRole::Reset);
  CHECK(find_class(classes, "rst_n")->active_low);
  CHECK(find_class(classes, "d")->role == PortRole::Data);
}

TEST_CASE("combinational ports are all data") {
  ModuleAst ast = parse_text(
      "module m(input a, input b, output y); assign y = a & b; endmodule");
  for (const auto& pc : classify_ports(ast)) {
    CHECK(pc.role == PortRole::Data);
  }
}

TEST_CASE("clock-ish names without edge usage stay data") {
  // Rule-table oracle: 'clock_enable' matches neither the clock name table
  // nor any edge sensitivity, so it must classify as data.
  ModuleAst ast = parse_text(
      "module m(input clock_enable, input [1:0] d, output [1:0] y);\n"
      "assign y = clock_enable ? d : 2'd0;\nendmodule");
  CHECK(find_class(classify_ports(ast), "clock_enable")->role == PortRole::Data);
}

TEST_CASE("edge-used non-standard name becomes the clock") {
  ModuleAst ast = parse_text(
      "module m(input ck, input d, output reg q);\n"
      "always @(posedge ck) q <= d;\nendmodule");
  CHECK(find_class(classify_ports(ast), "ck")->role == PortRole::Clock);
}

TEST_CASE("active-high reset table") {
  ModuleAst ast = parse_text(
      "module m(input clk, input rst, input d, output reg q);\n"
      "always @(posedge clk) begin if (rst) q <= 0; else q <= d; end\nendmodule");
  const PortClass* rst = find_class(classify_ports(ast), "rst");
  REQUIRE(rst != nullptr);
  CHECK(rst->role == PortRole::Reset);
  CHECK_FALSE(rst->active_low);
}

TEST_CASE("generation is deterministic and port-order independent") {
  std::vector<PortClass> classes = {
      {"alpha", 4, PortRole::Data, false},
      {"beta", 8, PortRole::Data, false},
  };
  StimulusSet a = generate_stimuli(classes, 64, 77);
  StimulusSet b = generate_stimuli(classes, 64, 77);
  CHECK(a.columns == b.columns);

  std::vector<PortClass> reversed = {classes[1], classes[0]};
  StimulusSet c = generate_stimuli(reversed, 64, 77);
  CHECK(a.columns.at("alpha") == c.columns.at("alpha"));
  CHECK(a.columns.at("beta") == c.columns.at("beta"));

  StimulusSet d = generate_stimuli(classes, 64, 78);
  CHECK(a.columns.at("alpha") != d.columns.at("alpha"));
}

TEST_CASE("columns are prefix-stable in n") {
  std::vector<PortClass> classes = {{"x", 6, PortRole::Data, false}};
  StimulusSet small = generate_stimuli(classes, 50, 3);
  StimulusSet large = generate_stimuli(classes, 100, 3);
  for (int i = 0; i < 50; ++i) {
    CHECK(small.columns.at("x")[i] == large.columns.at("x")[i]);
  }
}

TEST_CASE("single-bit columns are roughly balanced") {
  std::vector<PortClass> classes = {{"b", 1, PortRole::Data, false}};
  StimulusSet set = generate_stimuli(classes, 10000, 123);
  double ones = 0;
  for (auto v : set.columns.at("b")) ones += static_cast<double>(v);
  double fraction = ones / 10000.0;
  CHECK(fraction >= 0.47);
  CHECK(fraction <= 0.53);
}

TEST_CASE("reset columns follow the assert-then-release schedule") {
  std::vector<PortClass> classes = {
      {"rst", 1, PortRole::Reset, false},
      {"rst_n", 1, PortRole::Reset, true},
      {"d", 2, PortRole::Data, false},
  };
  StimulusSet set = generate_stimuli(classes, 5, 1);
  CHECK(set.columns.at("rst") == std::vector<std::uint64_t>{1, 1, 0, 0, 0});
  CHECK(set.columns.at("rst_n") == std::vector<std::uint64_t>{0, 0, 1, 1, 1});
}

TEST_CASE("values stay below the port's range") {
  std::vector<PortClass> classes = {{"w", 5, PortRole::Data, false}};
  StimulusSet set = generate_stimuli(classes, 2000, 9);
  for (auto v : set.columns.at("w")) CHECK(v < 32);
}

TEST_CASE("coverage floor for narrow ports") {
  // With n = 64 * 2^w draws, missing any value is vanishingly unlikely;
  // statistically asserted over 200 seeds.
  for (int w : {1, 2, 3, 4}) {
    int n = 64 << w;
    int full_coverage = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      std::vector<PortClass> classes = {{"v", w, PortRole::Data, false}};
      StimulusSet set = generate_stimuli(classes, n, seed);
      std::set<std::uint64_t> seen(set.columns.at("v").begin(),
                                   set.columns.at("v").end());
      if (seen.size() == (std::size_t{1} << w)) ++full_coverage;
    }
    CHECK(full_coverage >= 198);  // >= 99%
  }
}

TEST_CASE("exhaustive stimuli enumerate the data space low bits first") {
  std::vector<PortClass> classes = {
      {"a", 2, PortRole::Data, false},
      {"b", 1, PortRole::Data, false},
  };
  StimulusSet set = exhaustive_stimuli(classes);
  CHECK(set.n == 8);
  CHECK(set.columns.at("a") ==
        std::vector<std::uint64_t>{0, 1, 2, 3, 0, 1, 2, 3});
  CHECK(set.columns.at("b") ==
        std::vector<std::uint64_t>{0, 0, 0, 0, 1, 1, 1, 1});

  std::vector<PortClass> wide = {{"big", 21, PortRole::Data, false}};
  CHECK_THROWS_AS(exhaustive_stimuli(wide), Error);
}
