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

#include "salvkit/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "salvkit/json_io.hpp"
#include "salvkit/sha256.hpp"

namespace fs = std::filesystem;

namespace salv {

const char* const kToolkitVersion = "0.1.0";

PipelineConfig config_from_json(const nlohmann::json& j) {
  PipelineConfig c;
  try {
    c.corpus_dir = j.value("corpus_dir", c.corpus_dir);
    c.manifest_input = j.value("manifest_input", c.manifest_input);
    c.output_dir = j.value("output_dir", c.output_dir);
    c.n_stimuli = j.value("n_stimuli", c.n_stimuli);
    c.seed = j.value("seed", c.seed);
    c.workers = j.value("workers", c.workers);
    c.mode.use_complete_correct =
        j.value("use_complete_correct", c.mode.use_complete_correct);
    c.mode.use_partial_correct =
        j.value("use_partial_correct", c.mode.use_partial_correct);
    c.mode.filter_incorrect_signals =
        j.value("filter_incorrect_signals", c.mode.filter_incorrect_signals);
    c.beta = j.value("beta", c.beta);
    c.pair_cap = j.value("pair_cap", c.pair_cap);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("bad config: ") + e.what());
  }
  if (c.n_stimuli < 1 || c.beta <= 0 || c.workers < 0) {
    throw Error(ErrorKind::ConfigError,
                "config requires n_stimuli >= 1, beta > 0, workers >= 0");
  }
  if (!c.mode.use_complete_correct && !c.mode.use_partial_correct) {
    throw Error(ErrorKind::ConfigError,
                "at least one of use_complete_correct/use_partial_correct");
  }
  return c;
}

nlohmann::ordered_json config_to_json(const PipelineConfig& c) {
  nlohmann::ordered_json j;
  j["corpus_dir"] = c.corpus_dir;
  j["manifest_input"] = c.manifest_input;
  j["output_dir"] = c.output_dir;
  j["n_stimuli"] = c.n_stimuli;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["use_complete_correct"] = c.mode.use_complete_correct;
  j["use_partial_correct"] = c.mode.use_partial_correct;
  j["filter_incorrect_signals"] = c.mode.filter_incorrect_signals;
  j["beta"] = c.beta;
  j["pair_cap"] = c.pair_cap;
  return j;
}

namespace {

struct PromptJob {
  std::string prompt_id;
  std::string ref_path;
  std::vector<std::string> cand_paths;
  bool layout_ok = true;
  std::string layout_error;
};

std::vector<PromptJob> scan_corpus(const PipelineConfig& config) {
  std::vector<PromptJob> jobs;
  if (!config.manifest_input.empty()) {
    std::ifstream in(config.manifest_input);
    if (!in) {
      throw Error(ErrorKind::ConfigError,
                  "cannot open manifest index: " + config.manifest_input);
    }
    nlohmann::json j;
    try {
      in >> j;
      for (const auto& entry : j) {
        PromptJob job;
        job.prompt_id = entry.at("prompt_id").get<std::string>();
        job.ref_path = entry.at("ref").get<std::string>();
        for (const auto& c : entry.at("cands")) {
          job.cand_paths.push_back(c.get<std::string>());
        }
        jobs.push_back(std::move(job));
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::CorpusLayoutError,
                  std::string("bad manifest index: ") + e.what());
    }
  } else {
    if (config.corpus_dir.empty() || !fs::is_directory(config.corpus_dir)) {
      throw Error(ErrorKind::CorpusLayoutError,
                  "corpus directory not found: " + config.corpus_dir);
    }
    std::vector<fs::path> prompt_dirs;
    for (const auto& entry : fs::directory_iterator(config.corpus_dir)) {
      if (entry.is_directory()) prompt_dirs.push_back(entry.path());
    }
    std::sort(prompt_dirs.begin(), prompt_dirs.end());
    for (const auto& dir : prompt_dirs) {
      PromptJob job;
      job.prompt_id = dir.filename().string();
      fs::path ref = dir / "ref.v";
      if (!fs::exists(ref)) {
        job.layout_ok = false;
        job.layout_error = "missing ref.v";
      } else {
        job.ref_path = ref.string();
        std::vector<fs::path> cands;
        for (const auto& f : fs::directory_iterator(dir)) {
          std::string name = f.path().filename().string();
          if (f.is_regular_file() && name.rfind("cand_", 0) == 0 &&
              name.size() > 2 && name.substr(name.size() - 2) == ".v") {
            cands.push_back(f.path());
          }
        }
        std::sort(cands.begin(), cands.end());
        for (const auto& c : cands) job.cand_paths.push_back(c.string());
      }
      jobs.push_back(std::move(job));
    }
  }
  if (jobs.empty()) {
    throw Error(ErrorKind::CorpusLayoutError, "corpus contains no prompts");
  }
  return jobs;
}

struct PromptOutcome {
  PromptStats stats;
  std::vector<std::string> jsonl;
  StageTimes times;
};

PromptOutcome process_prompt(const PromptJob& job, const PipelineConfig& config) {
  PromptOutcome out;
  out.stats.prompt_id = job.prompt_id;
  if (!job.layout_ok) {
    out.stats.status = "layout_error";
    out.stats.error = job.layout_error;
    return out;
  }
  try {
    SourceText ref_src = load_source(job.ref_path);
    std::vector<SourceText> cand_srcs;
    cand_srcs.reserve(job.cand_paths.size());
    for (const auto& path : job.cand_paths) {
      cand_srcs.push_back(load_source(path));
    }
    out.stats.candidates = static_cast<int>(cand_srcs.size());

    ReferenceContext ref =
        prepare_reference(ref_src, config.n_stimuli, config.seed,
                          /*exhaustive=*/false, &out.times);
    std::vector<CandidateReport> reports;
    reports.reserve(cand_srcs.size());
    for (std::size_t i = 0; i < cand_srcs.size(); ++i) {
      reports.push_back(verify_candidate(ref, cand_srcs[i],
                                         static_cast<int>(i), &out.times));
      if (reports.back().status == CandidateStatus::Simulated) {
        ++out.stats.simulated;
      }
    }

    PairBuildInput in;
    in.prompt_id = job.prompt_id;
    in.reports = &reports;
    in.sources = &cand_srcs;
    in.ref_outputs = ref.outputs;
    in.mode = config.mode;
    in.cap = config.pair_cap;
    in.times = &out.times;
    std::vector<PreferencePair> pairs = build_pairs(in);
    out.stats.pairs = static_cast<int>(pairs.size());

    for (const auto& pair : pairs) {
      out.jsonl.push_back(pair_to_json(pair).dump());
    }
    out.stats.status = "ok";
  } catch (const Error& e) {
    out.stats.status = e.kind() == ErrorKind::ReferenceInvalid
                           ? "reference_invalid"
                           : "error";
    out.stats.error = e.what();
  } catch (const std::exception& e) {
    out.stats.status = "error";
    out.stats.error = e.what();
  }
  return out;
}

}  // namespace

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["toolkit_version"] = version;
  j["config"] = config;
  nlohmann::ordered_json prompt_arr = nlohmann::ordered_json::array();
  for (const auto& p : prompts) {
    nlohmann::ordered_json jp;
    jp["prompt_id"] = p.prompt_id;
    jp["status"] = p.status;
    jp["candidates"] = p.candidates;
    jp["simulated"] = p.simulated;
    jp["pairs"] = p.pairs;
    if (!p.error.empty()) jp["error"] = p.error;
    prompt_arr.push_back(std::move(jp));
  }
  j["prompts"] = std::move(prompt_arr);
  nlohmann::ordered_json totals;
  totals["prompts"] = prompts.size();
  totals["prompts_succeeded"] = prompts_succeeded;
  totals["candidates"] = total_candidates;
  totals["pairs"] = total_pairs;
  j["totals"] = std::move(totals);
  auto stage = [](const StageTimes::Stage& s) {
    nlohmann::ordered_json js;
    js["count"] = s.count;
    js["total_s"] = s.seconds;
    js["mean_s"] = s.mean();
    return js;
  };
  nlohmann::ordered_json timings;
  timings["parse"] = stage(times.parse);
  timings["graph_slice"] = stage(times.graph_slice);
  timings["simulate"] = stage(times.simulate);
  timings["compare"] = stage(times.compare);
  timings["wall_s"] = wall_seconds;
  j["timings"] = std::move(timings);
  j["output_hash"] = output_hash;
  j["prefs_path"] = prefs_path;
  return j;
}

RunManifest run_pipeline(const PipelineConfig& config) {
  auto wall_start = std::chrono::steady_clock::now();
  std::vector<PromptJob> jobs = scan_corpus(config);

  int workers = config.workers;
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = 1;
  }
  workers = std::min<int>(workers, static_cast<int>(jobs.size()));

  std::vector<PromptOutcome> outcomes(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker_fn = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      outcomes[i] = process_prompt(jobs[i], config);
    }
  };
  if (workers <= 1) {
    worker_fn();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker_fn);
    for (auto& t : pool) t.join();
  }

  fs::create_directories(config.output_dir);
  fs::path prefs_path = fs::path(config.output_dir) / "prefs.jsonl";
  std::string prefs_bytes;
  for (const auto& outcome : outcomes) {
    for (const auto& line : outcome.jsonl) {
      prefs_bytes += line;
      prefs_bytes += '\n';
    }
  }
  {
    std::ofstream out(prefs_path, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorKind::SinkFailure,
                  "cannot write " + prefs_path.string());
    }
    out << prefs_bytes;
  }

  RunManifest manifest;
  manifest.version = kToolkitVersion;
  manifest.config = config_to_json(config);
  manifest.prefs_path = prefs_path.string();
  manifest.output_hash = "sha256:" + sha256_hex(prefs_bytes);
  for (const auto& outcome : outcomes) {
    manifest.prompts.push_back(outcome.stats);
    manifest.times.merge(outcome.times);
    manifest.total_candidates +=
        static_cast<std::uint64_t>(outcome.stats.candidates);
    manifest.total_pairs += static_cast<std::uint64_t>(outcome.stats.pairs);
    if (outcome.stats.status == "ok") ++manifest.prompts_succeeded;
  }
  std::chrono::duration<double> wall =
      std::chrono::steady_clock::now() - wall_start;
  manifest.wall_seconds = wall.count();

  fs::path manifest_path = fs::path(config.output_dir) / "manifest.json";
  std::ofstream mout(manifest_path, std::ios::binary | std::ios::trunc);
  if (!mout) {
    throw Error(ErrorKind::SinkFailure,
                "cannot write " + manifest_path.string());
  }
  mout << manifest.to_json().dump(2) << "\n";
  return manifest;
}

std::string stage_timings_table(const RunManifest& manifest) {
  std::ostringstream os;
  os << std::left << std::setw(14) << "stage" << std::right << std::setw(10)
     << "samples" << std::setw(14) << "total_s" << std::setw(16)
     << "mean_s/sample" << "\n";
  auto row = [&](const char* name, const StageTimes::Stage& s) {
    os << std::left << std::setw(14) << name << std::right << std::setw(10)
       << s.count << std::setw(14) << std::fixed << std::setprecision(4)
       << s.seconds << std::setw(16) << std::setprecision(6) << s.mean()
       << "\n";
  };
  row("parse", manifest.times.parse);
  row("graph+slice", manifest.times.graph_slice);
  row("simulate", manifest.times.simulate);
  row("compare", manifest.times.compare);
  return os.str();
}

}  // namespace salv
