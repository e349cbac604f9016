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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "salvkit/json_io.hpp"
#include "salvkit/pipeline.hpp"

using namespace salv;
namespace fs = std::filesystem;

namespace {

const std::string kCorpus = std::string(SALV_TEST_DIR) + "/fixtures/corpus";

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("salvkit_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

PipelineConfig fixture_config(const std::string& tag) {
  PipelineConfig config;
  config.corpus_dir = kCorpus;
  config.output_dir = (fresh_dir(tag) / "out").string();
  config.n_stimuli = 100;
  config.seed = 7;
  config.workers = 1;
  return config;
}

const PromptStats& stats_of(const RunManifest& manifest, const std::string& id) {
  for (const auto& p : manifest.prompts) {
    if (p.prompt_id == id) return p;
  }
  REQUIRE_MESSAGE(false, "missing prompt " + id);
  static PromptStats dummy;
  return dummy;
}

}  // namespace

TEST_CASE("fixture corpus counts match the hand enumeration") {
  RunManifest manifest = run_pipeline(fixture_config("counts"));
  CHECK(manifest.prompts_succeeded == 3);
  CHECK(manifest.total_candidates == 11);

  const PromptStats& p01 = stats_of(manifest, "p01");
  CHECK(p01.status == "ok");
  CHECK(p01.candidates == 5);
  CHECK(p01.simulated == 3);
  CHECK(p01.pairs == 5);

  const PromptStats& p02 = stats_of(manifest, "p02");
  CHECK(p02.simulated == 3);
  CHECK(p02.pairs == 2);

  const PromptStats& p03 = stats_of(manifest, "p03");
  CHECK(p03.candidates == 3);
  CHECK(p03.simulated == 2);  // the oscillator is a sim_error
  CHECK(p03.pairs == 3);

  CHECK(manifest.total_pairs == 10);

  // Every emitted record satisfies the record schema.
  std::ifstream prefs(manifest.prefs_path);
  int lines = 0;
  std::string line;
  while (std::getline(prefs, line)) {
    if (line.empty()) continue;
    ++lines;
    PreferencePair pair = pair_from_json(nlohmann::json::parse(line));
    CHECK(!pair.contrast.empty());
    CHECK(!pair.w_mask.empty());
    CHECK(!pair.l_mask.empty());
  }
  CHECK(lines == 10);

  // Timing table has all four stages with nonzero sample counts.
  std::string table = stage_timings_table(manifest);
  CHECK(table == doctest::Contains("parse"));
  CHECK(table == doctest::Contains("graph+slice"));
  CHECK(table == doctest::Contains("simulate"));
  CHECK(table == doctest::Contains("compare"));
  CHECK(manifest.times.parse.count > 0);
  CHECK(manifest.times.simulate.count > 0);
  CHECK(manifest.times.compare.count > 0);
  CHECK(manifest.times.graph_slice.count > 0);
}

TEST_CASE("pipeline output matches the golden prefs file byte for byte") {
  RunManifest manifest = run_pipeline(fixture_config("golden"));
  std::string got = slurp(manifest.prefs_path);
  std::string want =
      slurp(std::string(SALV_TEST_DIR) + "/golden/pipeline_prefs_golden.jsonl");
  CHECK(got == want);
}

TEST_CASE("reruns and worker counts do not change the output bytes") {
  RunManifest one = run_pipeline(fixture_config("det1"));
  RunManifest two = run_pipeline(fixture_config("det2"));
  PipelineConfig threaded = fixture_config("det4");
  threaded.workers = 4;
  RunManifest four = run_pipeline(threaded);

  CHECK(one.output_hash == two.output_hash);
  CHECK(one.output_hash == four.output_hash);
  CHECK(slurp(one.prefs_path) == slurp(four.prefs_path));
  CHECK(one.output_hash.rfind("sha256:", 0) == 0);
}

TEST_CASE("degenerate prompts are recorded, never fatal") {
  fs::path corpus = fresh_dir("degenerate") / "corpus";
  fs::create_directories(corpus / "empty_cands");
  std::ofstream(corpus / "empty_cands" / "ref.v")
      << "module m(input a, output y); assign y = a; endmodule\n";
  fs::create_directories(corpus / "bad_ref");
  std::ofstream(corpus / "bad_ref" / "ref.v") << "module broken(((\n";
  std::ofstream(corpus / "bad_ref" / "cand_00.v")
      << "module m(input a, output y); assign y = a; endmodule\n";
  fs::create_directories(corpus / "no_ref");

  PipelineConfig config;
  config.corpus_dir = corpus.string();
  config.output_dir = (corpus.parent_path() / "out").string();
  config.workers = 2;
  RunManifest manifest = run_pipeline(config);

  CHECK(stats_of(manifest, "empty_cands").status == "ok");
  CHECK(stats_of(manifest, "empty_cands").pairs == 0);
  CHECK(stats_of(manifest, "bad_ref").status == "reference_invalid");
  CHECK(stats_of(manifest, "no_ref").status == "layout_error");
  CHECK(manifest.prompts_succeeded == 1);
  CHECK(fs::exists(manifest.prefs_path));
  CHECK(slurp(manifest.prefs_path).empty());
}

TEST_CASE("corpus layout errors are fatal when nothing can run") {
  PipelineConfig config;
  config.corpus_dir = "/nonexistent/corpus/dir";
  config.output_dir = (fresh_dir("fatal") / "out").string();
  CHECK_THROWS_AS(run_pipeline(config), Error);
  try {
    run_pipeline(config);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CorpusLayoutError);
  }
}

TEST_CASE("manifest index input replaces the directory convention") {
  fs::path dir = fresh_dir("index");
  std::ofstream(dir / "r.v")
      << "module m(input a, output y); assign y = a; endmodule\n";
  std::ofstream(dir / "c0.v")
      << "module m(input a, output y); assign y = ~a; endmodule\n";
  std::ofstream(dir / "c1.v")
      << "module m(input a, output y); assign y = a; // same\nendmodule\n";
  nlohmann::json index = nlohmann::json::array();
  index.push_back({{"prompt_id", "only"},
                   {"ref", (dir / "r.v").string()},
                   {"cands", {(dir / "c0.v").string(), (dir / "c1.v").string()}}});
  std::ofstream(dir / "index.json") << index.dump();

  PipelineConfig config;
  config.manifest_input = (dir / "index.json").string();
  config.output_dir = (dir / "out").string();
  RunManifest manifest = run_pipeline(config);
  CHECK(manifest.prompts_succeeded == 1);
  CHECK(stats_of(manifest, "only").candidates == 2);
  CHECK(stats_of(manifest, "only").pairs == 1);  // (c1 over c0)
}

TEST_CASE("config json round trip and validation") {
  PipelineConfig config;
  config.corpus_dir = "corpus";
  config.n_stimuli = 64;
  config.seed = 99;
  config.mode.filter_incorrect_signals = false;
  nlohmann::ordered_json j = config_to_json(config);
  PipelineConfig back = config_from_json(j);
  CHECK(back.corpus_dir == "corpus");
  CHECK(back.n_stimuli == 64);
  CHECK(back.seed == 99);
  CHECK_FALSE(back.mode.filter_incorrect_signals);

  nlohmann::json bad = {{"n_stimuli", 0}};
  CHECK_THROWS_AS(config_from_json(bad), Error);
  nlohmann::json both_off = {{"use_complete_correct", false},
                             {"use_partial_correct", false}};
  CHECK_THROWS_AS(config_from_json(both_off), Error);
}

TEST_CASE("stimulus and trace json round trips") {
  std::vector<PortClass> classes = {
      {"clk", 1, PortRole::Clock, false},
      {"rst_n", 1, PortRole::Reset, true},
      {"d", 9, PortRole::Data, false},
  };
  StimulusSet set = generate_stimuli(classes, 10, 0xFEEDuLL);
  StimulusSet back = stimulus_from_json(stimulus_to_json(set));
  CHECK(back.seed == set.seed);
  CHECK(back.n == set.n);
  CHECK(back.columns == set.columns);
  REQUIRE(back.classes.size() == set.classes.size());
  for (std::size_t i = 0; i < set.classes.size(); ++i) {
    CHECK(back.classes[i].signal == set.classes[i].signal);
    CHECK(back.classes[i].role == set.classes[i].role);
    CHECK(back.classes[i].active_low == set.classes[i].active_low);
  }

  SimTrace trace;
  trace.cycles = 3;
  trace.outputs["wide"] = {0, 1, ~std::uint64_t{0}};  // 64-bit safe as strings
  SimTrace t2 = trace_from_json(trace_to_json(trace));
  CHECK(t2.cycles == 3);
  CHECK(t2.outputs == trace.outputs);

  CandidateReport report;
  report.candidate_id = 3;
  report.status = CandidateStatus::Simulated;
  report.verdicts.push_back({"y", false, 17});
  report.verdicts.push_back({"z", true, {}});
  report.correct_set = {"z"};
  CandidateReport r2 = report_from_json(report_to_json(report));
  CHECK(r2.candidate_id == 3);
  CHECK(r2.status == CandidateStatus::Simulated);
  CHECK(r2.correct_set == report.correct_set);
  REQUIRE(r2.verdicts.size() == 2);
  CHECK(r2.verdicts[0].first_mismatch_cycle == 17);
  CHECK_FALSE(r2.verdicts[1].first_mismatch_cycle.has_value());
}
