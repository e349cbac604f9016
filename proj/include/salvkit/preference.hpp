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

#ifndef SALVKIT_PREFERENCE_HPP
#define SALVKIT_PREFERENCE_HPP

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "salvkit/siggraph.hpp"
#include "salvkit/verifier.hpp"

namespace salv {

// One training record: preferred/dispreferred module sources, the contrast
// signals (correct in w, incorrect in l), and the byte-span masks locating
// each side's implementation of those signals.
struct PreferencePair {
  std::string prompt_id;
  int w_id = 0;
  int l_id = 0;
  SourceText y_w;
  SourceText y_l;
  std::set<std::string> contrast;
  std::vector<Span> w_mask;
  std::vector<Span> l_mask;
  bool w_fully_correct = false;
};

struct DatasetMode {
  bool use_complete_correct = true;
  bool use_partial_correct = true;
  bool filter_incorrect_signals = true;
};

// Maximal contrast set c_w \ c_l; empty means the ordered pair is ineligible.
std::set<std::string> choose_contrast(const std::set<std::string>& c_w,
                                      const std::set<std::string>& c_l);

struct PairBuildInput {
  std::string prompt_id;
  const std::vector<CandidateReport>* reports = nullptr;
  const std::vector<SourceText>* sources = nullptr;  // aligned with reports
  std::vector<std::string> ref_outputs;              // full output set
  DatasetMode mode;
  std::uint64_t cap = 0;          // max pairs for this prompt; 0 = unlimited
  StageTimes* times = nullptr;    // graph+slice samples, optional
};

// Enumerates ordered candidate pairs (i, j), i != j, in index order and keeps
// those with a nonempty contrast set admitted by the dataset mode. Masks are
// slice spans when filter_incorrect_signals is set, the whole module body
// otherwise. Pairs whose sides cannot be sliced are skipped with a note in
// `skipped` (never fatal).
std::vector<PreferencePair> build_pairs(const PairBuildInput& in,
                                        std::vector<std::string>* skipped = nullptr);

// One JSON object per pair, newline-terminated. Returns the count written;
// throws Error(SinkFailure) when the stream fails.
std::size_t emit_records(const std::vector<PreferencePair>& pairs,
                         std::ostream& sink);

// Invariant checker used by tests and the acceptance suite. Returns
// human-readable violations; empty means the pair is well-formed. Recomputes
// the expected masks from the pair's own sources when the filter is on.
std::vector<std::string> validate_pair(const PreferencePair& pair,
                                       const std::set<std::string>& c_w,
                                       const std::set<std::string>& c_l,
                                       bool filter_incorrect_signals);

}  // namespace salv

#endif  // SALVKIT_PREFERENCE_HPP
