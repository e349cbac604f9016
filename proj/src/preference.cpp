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

#include "salvkit/preference.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "salvkit/json_io.hpp"
#include "salvkit/parser.hpp"

namespace salv {

std::set<std::string> choose_contrast(const std::set<std::string>& c_w,
                                      const std::set<std::string>& c_l) {
  std::set<std::string> out;
  std::set_difference(c_w.begin(), c_w.end(), c_l.begin(), c_l.end(),
                      std::inserter(out, out.begin()));
  return out;
}

namespace {

struct SlicedModule {
  ModuleAst ast;
  SignalGraph graph;
};

// Parse + graph each candidate at most once per prompt.
class SliceCache {
 public:
  explicit SliceCache(const std::vector<SourceText>& sources)
      : sources_(sources), entries_(sources.size()) {}

  // Throws Error when the source fails to parse.
  SlicedModule& get(std::size_t index) {
    auto& slot = entries_[index];
    if (slot.module) return *slot.module;
    if (!slot.error.empty()) {
      throw Error(ErrorKind::UnknownSignal, slot.error);
    }
    try {
      auto mod = std::make_unique<SlicedModule>();
      mod->ast = parse_module(sources_[index]);
      mod->graph = build_graph(mod->ast);
      slot.module = std::move(mod);
      return *slot.module;
    } catch (const Error& e) {
      slot.error = e.what();
      throw;
    }
  }

 private:
  struct Entry {
    std::unique_ptr<SlicedModule> module;
    std::string error;
  };
  const std::vector<SourceText>& sources_;
  std::vector<Entry> entries_;
};

std::vector<Span> slice_mask(SlicedModule& mod, const std::set<std::string>& contrast) {
  SignalSlice slice = extract_slice(mod.ast, mod.graph, contrast);
  return slice.body_spans;
}

}  // namespace

std::vector<PreferencePair> build_pairs(const PairBuildInput& in,
                                        std::vector<std::string>* skipped) {
  const auto& reports = *in.reports;
  const auto& sources = *in.sources;
  std::set<std::string> all_outputs(in.ref_outputs.begin(), in.ref_outputs.end());

  SliceCache cache(sources);
  std::vector<PreferencePair> pairs;

  auto note_skip = [&](std::size_t i, std::size_t j, const std::string& why) {
    if (skipped != nullptr) {
      std::ostringstream os;
      os << in.prompt_id << ": pair (" << i << ", " << j << ") skipped: " << why;
      skipped->push_back(os.str());
    }
  };

  for (std::size_t i = 0; i < reports.size(); ++i) {
    for (std::size_t j = 0; j < reports.size(); ++j) {
      if (i == j) continue;
      if (in.cap != 0 && pairs.size() >= in.cap) return pairs;
      const CandidateReport& rw = reports[i];
      const CandidateReport& rl = reports[j];
      if (rw.status != CandidateStatus::Simulated) continue;

      std::set<std::string> contrast = choose_contrast(rw.correct_set, rl.correct_set);
      if (contrast.empty()) continue;

      bool w_fully = rw.correct_set == all_outputs;
      if (w_fully && !in.mode.use_complete_correct) continue;
      if (!w_fully && !in.mode.use_partial_correct) continue;

      if (sources[i].text == sources[j].text) continue;

      PreferencePair pair;
      pair.prompt_id = in.prompt_id;
      pair.w_id = static_cast<int>(i);
      pair.l_id = static_cast<int>(j);
      pair.y_w = sources[i];
      pair.y_l = sources[j];
      pair.contrast = contrast;
      pair.w_fully_correct = w_fully;

      try {
        ScopedStage t(in.times ? &in.times->graph_slice : nullptr);
        SlicedModule& wm = cache.get(i);
        SlicedModule& lm = cache.get(j);
        // Slices gate eligibility in every mode so the emitted pair set does
        // not depend on the filter flag; the flag only selects the masks.
        std::vector<Span> w_mask = slice_mask(wm, contrast);
        std::vector<Span> l_mask = slice_mask(lm, contrast);
        if (in.mode.filter_incorrect_signals) {
          pair.w_mask = std::move(w_mask);
          pair.l_mask = std::move(l_mask);
        } else {
          pair.w_mask = {wm.ast.body_span};
          pair.l_mask = {lm.ast.body_span};
        }
      } catch (const Error& e) {
        note_skip(i, j, e.what());
        continue;
      }

      pairs.push_back(std::move(pair));
    }
  }
  return pairs;
}

std::size_t emit_records(const std::vector<PreferencePair>& pairs,
                         std::ostream& sink) {
  std::size_t written = 0;
  for (const auto& pair : pairs) {
    sink << pair_to_json(pair).dump() << "\n";
    if (!sink) {
      throw Error(ErrorKind::SinkFailure, "failed to write preference record");
    }
    ++written;
  }
  sink.flush();
  if (!sink) {
    throw Error(ErrorKind::SinkFailure, "failed to flush preference records");
  }
  return written;
}

std::vector<std::string> validate_pair(const PreferencePair& pair,
                                       const std::set<std::string>& c_w,
                                       const std::set<std::string>& c_l,
                                       bool filter_incorrect_signals) {
  std::vector<std::string> problems;
  auto complain = [&](const std::string& what) { problems.push_back(what); };

  if (pair.contrast.empty()) complain("contrast set is empty");
  for (const auto& c : pair.contrast) {
    if (!c_w.count(c)) complain("contrast signal '" + c + "' not correct in w");
    if (c_l.count(c)) complain("contrast signal '" + c + "' correct in l");
  }
  if (pair.y_w.text == pair.y_l.text) complain("y_w equals y_l");

  auto check_spans = [&](const std::vector<Span>& spans, const SourceText& src,
                         const char* which) {
    for (std::size_t k = 0; k < spans.size(); ++k) {
      if (spans[k].end > src.text.size() || spans[k].start > spans[k].end) {
        complain(std::string(which) + " span out of range");
      }
      if (k > 0 && spans[k - 1].end > spans[k].start) {
        complain(std::string(which) + " spans overlap or are unsorted");
      }
    }
  };
  check_spans(pair.w_mask, pair.y_w, "w_mask");
  check_spans(pair.l_mask, pair.y_l, "l_mask");

  try {
    ModuleAst w_ast = parse_module(pair.y_w);
    ModuleAst l_ast = parse_module(pair.y_l);
    if (filter_incorrect_signals) {
      SignalGraph wg = build_graph(w_ast);
      SignalGraph lg = build_graph(l_ast);
      if (extract_slice(w_ast, wg, pair.contrast).body_spans != pair.w_mask) {
        complain("w_mask differs from recomputed slice spans");
      }
      if (extract_slice(l_ast, lg, pair.contrast).body_spans != pair.l_mask) {
        complain("l_mask differs from recomputed slice spans");
      }
    } else {
      if (pair.w_mask != std::vector<Span>{w_ast.body_span}) {
        complain("w_mask is not the full module body span");
      }
      if (pair.l_mask != std::vector<Span>{l_ast.body_span}) {
        complain("l_mask is not the full module body span");
      }
    }
  } catch (const Error& e) {
    complain(std::string("pair sources failed to re-slice: ") + e.what());
  }
  return problems;
}

}  // namespace salv
