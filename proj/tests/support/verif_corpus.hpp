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

#ifndef SALVKIT_TESTS_VERIF_CORPUS_HPP
#define SALVKIT_TESTS_VERIF_CORPUS_HPP

#include <set>
#include <string>
#include <vector>

namespace salv::testing {

// Reference/candidate pair with per-signal ground truth fixed by
// construction. Every injected bug disagrees with the reference on at least
// 5% of the per-cycle input space, and every module has at most 16 data
// input bits, so exhaustive verdicts are exact and random-stimulus catch
// probability per bug is at least 1 - 0.95^N.
struct VerifFixture {
  std::string name;
  std::string ref;
  std::string cand;
  std::set<std::string> buggy;  // outputs whose implementation was mutated
  std::set<std::string> all_outputs;
  int data_input_bits = 0;

  std::set<std::string> all_outputs_minus_buggy() const {
    std::set<std::string> out;
    for (const auto& o : all_outputs) {
      if (!buggy.count(o)) out.insert(o);
    }
    return out;
  }
};

// Exactly 50 fixtures built from mutation families with analytically known
// disagreement fractions.
std::vector<VerifFixture> build_verification_corpus();

}  // namespace salv::testing

#endif  // SALVKIT_TESTS_VERIF_CORPUS_HPP
