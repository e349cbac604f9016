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

#ifndef SALVKIT_PIPELINE_HPP
#define SALVKIT_PIPELINE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "salvkit/preference.hpp"
#include "salvkit/timing.hpp"

namespace salv {

// Corpus layout on disk: <corpus_dir>/<prompt_id>/ref.v plus cand_*.v
// (lexicographic candidate order). A JSON index can replace the directory
// convention: [{"prompt_id": ..., "ref": path, "cands": [paths]}].
struct PipelineConfig {
  std::string corpus_dir;
  std::string manifest_input;  // JSON index; overrides corpus_dir when set
  std::string output_dir = "out";
  int n_stimuli = 100;
  std::uint64_t seed = 1;
  int workers = 0;  // 0 = available cores
  DatasetMode mode;
  double beta = 0.1;
  std::uint64_t pair_cap = 0;  // per prompt; 0 = unlimited
};

PipelineConfig config_from_json(const nlohmann::json& j);
nlohmann::ordered_json config_to_json(const PipelineConfig& config);

struct PromptStats {
  std::string prompt_id;
  std::string status;  // ok | reference_invalid | layout_error | error
  int candidates = 0;
  int simulated = 0;
  int pairs = 0;
  std::string error;
};

struct RunManifest {
  std::string version;
  nlohmann::ordered_json config;
  std::vector<PromptStats> prompts;
  int prompts_succeeded = 0;
  std::uint64_t total_candidates = 0;
  std::uint64_t total_pairs = 0;
  StageTimes times;
  double wall_seconds = 0.0;
  std::string output_hash;  // sha256 of prefs.jsonl (timings excluded)
  std::string prefs_path;

  nlohmann::ordered_json to_json() const;
};

// Runs verify -> build-pairs -> emit over every prompt, writing
// <output_dir>/prefs.jsonl and <output_dir>/manifest.json. Prompts with an
// invalid reference are recorded and skipped, never fatal. Identical config
// and corpus produce byte-identical prefs.jsonl under any worker count.
// Throws Error(ConfigError) / Error(CorpusLayoutError).
RunManifest run_pipeline(const PipelineConfig& config);

// Aligned per-stage table: count, total seconds, mean seconds per sample.
std::string stage_timings_table(const RunManifest& manifest);

extern const char* const kToolkitVersion;

}  // namespace salv

#endif  // SALVKIT_PIPELINE_HPP
