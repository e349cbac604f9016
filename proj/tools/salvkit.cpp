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
//
// salvkit — signal-level differential verification of Verilog modules and
// preference-dataset construction.
//
//   parse        check a module against the supported subset
//   slice        extract the implementation of one output signal
//   stim         classify ports and emit deterministic random stimuli
//   sim          simulate a module over a stimulus file
//   verify       per-signal differential verification against a reference
//   build-prefs  turn verification reports into preference records
//   dpo-check    evaluate the masked preference loss on a numeric batch
//   passk        pass@k estimate
//   run          full corpus pipeline (verify -> pairs -> records)

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "salvkit/json_io.hpp"
#include "salvkit/parser.hpp"
#include "salvkit/pipeline.hpp"
#include "salvkit/sha256.hpp"

namespace fs = std::filesystem;
using namespace salv;

namespace {

// Thrown from subcommand callbacks to force a specific process exit code.
struct ExitCode {
  int code;
};

int failure_exit(const Error& e) {
  if (e.diagnostic()) {
    std::cerr << e.diagnostic()->format() << "\n";
  } else {
    std::cerr << "salvkit: error: " << e.what() << "\n";
  }
  return 1;
}

std::vector<std::string> sorted_candidate_paths(const std::string& dir) {
  std::vector<fs::path> cands;
  for (const auto& f : fs::directory_iterator(dir)) {
    std::string name = f.path().filename().string();
    if (f.is_regular_file() && name.rfind("cand_", 0) == 0 &&
        name.size() > 2 && name.substr(name.size() - 2) == ".v") {
      cands.push_back(f.path());
    }
  }
  std::sort(cands.begin(), cands.end());
  std::vector<std::string> out;
  for (const auto& p : cands) out.push_back(p.string());
  return out;
}

DatasetMode parse_mode_string(const std::string& mode_str, bool filter) {
  DatasetMode mode;
  mode.filter_incorrect_signals = filter;
  if (mode_str == "complete") {
    mode.use_complete_correct = true;
    mode.use_partial_correct = false;
  } else if (mode_str == "partial") {
    mode.use_complete_correct = false;
    mode.use_partial_correct = true;
  } else if (mode_str == "complete+partial" || mode_str == "partial+complete") {
    mode.use_complete_correct = true;
    mode.use_partial_correct = true;
  } else {
    throw Error(ErrorKind::ConfigError,
                "mode must be complete, partial, or complete+partial");
  }
  return mode;
}

void write_text_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::SinkFailure, "cannot write " + path);
  out << bytes;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigError,
                path + ": invalid JSON: " + std::string(e.what()));
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"signal-level Verilog verification and preference datasets"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 1;
  int n_stimuli = 100;
  int workers = 0;
  std::string config_path;
  app.add_option("--seed", seed, "PRNG seed");
  app.add_option("--n", n_stimuli, "stimulus vectors per prompt");
  app.add_option("--workers", workers, "worker threads (0 = cores)")
      ->envname("SALVKIT_WORKERS");
  app.add_option("--config", config_path, "JSON config file (run)");

  // parse -------------------------------------------------------------
  auto* cmd_parse = app.add_subcommand("parse", "parse and subset-check a module");
  std::string parse_file;
  cmd_parse->add_option("file", parse_file, "Verilog file")->required();
  cmd_parse->callback([&]() {
    SourceText src = load_source(parse_file);
    std::vector<Diagnostic> diags = check_source(src);
    for (const auto& d : diags) std::cerr << d.format() << "\n";
    if (!diags.empty()) throw ExitCode{1};
    ModuleAst ast = parse_module(src);
    std::cout << "module " << ast.name << ": " << ast.ports.size()
              << " ports, " << ast.decls.size() << " nets, "
              << ast.items.size() << " items\n";
  });

  // slice -------------------------------------------------------------
  auto* cmd_slice = app.add_subcommand("slice", "extract one signal's implementation");
  std::string slice_file, slice_signal, slice_spans_path;
  cmd_slice->add_option("file", slice_file, "Verilog file")->required();
  cmd_slice->add_option("--signal", slice_signal, "target output signal")->required();
  cmd_slice->add_option("--spans", slice_spans_path, "write span list JSON here");
  cmd_slice->callback([&]() {
    SourceText src = load_source(slice_file);
    ModuleAst ast = parse_module(src);
    SignalGraph graph = build_graph(ast);
    SignalSlice slice = extract_slice(ast, graph, {slice_signal});
    std::cout << slice.text;
    if (!slice_spans_path.empty()) {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const Span& s : slice.spans) {
        arr.push_back({{"start", s.start}, {"end", s.end}});
      }
      write_text_file(slice_spans_path, arr.dump(2) + "\n");
    }
  });

  // stim --------------------------------------------------------------
  auto* cmd_stim = app.add_subcommand("stim", "generate deterministic stimuli");
  std::string stim_file, stim_out;
  cmd_stim->add_option("file", stim_file, "Verilog file")->required();
  cmd_stim->add_option("-o,--out", stim_out, "stimulus JSON path")->required();
  cmd_stim->callback([&]() {
    SourceText src = load_source(stim_file);
    ModuleAst ast = parse_module(src);
    StimulusSet set = generate_stimuli(classify_ports(ast), n_stimuli, seed);
    write_text_file(stim_out, stimulus_to_json(set).dump(2) + "\n");
    std::cout << "wrote " << set.n << " vectors for " << set.columns.size()
              << " columns to " << stim_out << "\n";
  });

  // sim ---------------------------------------------------------------
  auto* cmd_sim = app.add_subcommand("sim", "simulate a module over stimuli");
  std::string sim_file, sim_stimuli, sim_trace;
  cmd_sim->add_option("file", sim_file, "Verilog file")->required();
  cmd_sim->add_option("--stimuli", sim_stimuli, "stimulus JSON")->required();
  cmd_sim->add_option("--trace", sim_trace, "trace JSON output")->required();
  cmd_sim->callback([&]() {
    SourceText src = load_source(sim_file);
    ModuleAst ast = parse_module(src);
    SimInstance inst = elaborate(ast);
    StimulusSet set = stimulus_from_json(read_json_file(sim_stimuli));
    SimTrace trace = run(inst, set);
    write_text_file(sim_trace, trace_to_json(trace).dump(2) + "\n");
    std::cout << "simulated " << trace.cycles << " cycles, "
              << trace.outputs.size() << " outputs -> " << sim_trace << "\n";
  });

  // verify --------------------------------------------------------------
  auto* cmd_verify = app.add_subcommand("verify", "differential per-signal verification");
  std::string verify_ref, verify_cands, verify_out;
  bool verify_exhaustive = false;
  cmd_verify->add_option("--ref", verify_ref, "reference module")->required();
  cmd_verify->add_option("--cands", verify_cands, "candidate directory (cand_*.v)")
      ->required();
  cmd_verify->add_option("-o,--out", verify_out, "reports JSONL path")->required();
  cmd_verify->add_flag("--exhaustive", verify_exhaustive,
                       "enumerate all inputs (<= 20 data bits)");
  cmd_verify->callback([&]() {
    SourceText ref = load_source(verify_ref);
    std::vector<SourceText> cands;
    for (const auto& path : sorted_candidate_paths(verify_cands)) {
      cands.push_back(load_source(path));
    }
    std::vector<CandidateReport> reports =
        verify_prompt(ref, cands, n_stimuli, seed, verify_exhaustive);
    std::ostringstream os;
    for (const auto& r : reports) os << report_to_json(r).dump() << "\n";
    write_text_file(verify_out, os.str());
    int simulated = 0;
    for (const auto& r : reports) {
      if (r.status == CandidateStatus::Simulated) ++simulated;
    }
    std::cout << reports.size() << " candidates, " << simulated
              << " simulated -> " << verify_out << "\n";
  });

  // build-prefs ---------------------------------------------------------
  auto* cmd_prefs = app.add_subcommand("build-prefs", "preference records from reports");
  std::string prefs_reports, prefs_ref, prefs_cands, prefs_out;
  std::string prefs_mode = "complete+partial";
  std::string prefs_prompt_id = "prompt";
  bool prefs_filter = true;
  std::uint64_t prefs_cap = 0;
  cmd_prefs->add_option("--reports", prefs_reports, "reports JSONL from verify")
      ->required();
  cmd_prefs->add_option("--ref", prefs_ref, "reference module")->required();
  cmd_prefs->add_option("--cands", prefs_cands, "candidate directory")->required();
  cmd_prefs->add_option("-o,--out", prefs_out, "preference JSONL path")->required();
  cmd_prefs->add_option("--mode", prefs_mode, "complete | partial | complete+partial");
  cmd_prefs->add_flag("--filter-incorrect-signals,!--no-filter-incorrect-signals",
                      prefs_filter, "mask only contrast-signal slices");
  cmd_prefs->add_option("--cap", prefs_cap, "max pairs (0 = unlimited)");
  cmd_prefs->add_option("--prompt-id", prefs_prompt_id, "prompt id for records");
  cmd_prefs->callback([&]() {
    std::vector<CandidateReport> reports;
    {
      std::ifstream in(prefs_reports);
      if (!in) throw Error(ErrorKind::ConfigError, "cannot open " + prefs_reports);
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        reports.push_back(report_from_json(nlohmann::json::parse(line, nullptr, false)));
      }
    }
    std::vector<SourceText> cands;
    for (const auto& path : sorted_candidate_paths(prefs_cands)) {
      cands.push_back(load_source(path));
    }
    if (cands.size() != reports.size()) {
      throw Error(ErrorKind::ConfigError,
                  "reports and candidate directory are not aligned");
    }
    ModuleAst ref_ast = parse_module(load_source(prefs_ref));

    PairBuildInput in;
    in.prompt_id = prefs_prompt_id;
    in.reports = &reports;
    in.sources = &cands;
    in.ref_outputs = ref_ast.output_names();
    in.mode = parse_mode_string(prefs_mode, prefs_filter);
    in.cap = prefs_cap;
    std::vector<std::string> skipped;
    std::vector<PreferencePair> pairs = build_pairs(in, &skipped);
    for (const auto& note : skipped) std::cerr << note << "\n";
    std::ofstream out(prefs_out, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::SinkFailure, "cannot write " + prefs_out);
    std::size_t written = emit_records(pairs, out);
    std::cout << written << " pairs -> " << prefs_out << "\n";
  });

  // dpo-check -----------------------------------------------------------
  auto* cmd_dpo = app.add_subcommand("dpo-check", "masked preference loss on a batch");
  std::string dpo_batch_path;
  double dpo_beta = 0.0;
  cmd_dpo->add_option("--batch", dpo_batch_path, "batch JSON")->required();
  cmd_dpo->add_option("--beta", dpo_beta, "override batch beta");
  cmd_dpo->callback([&]() {
    DpoBatch batch = batch_from_json(read_json_file(dpo_batch_path));
    if (dpo_beta > 0) batch.beta = dpo_beta;
    DpoResult r = dpo_loss(batch);
    double fd = dpo_grad_fd_error(batch);
    std::printf("loss   %.12g\n", r.loss);
    std::printf("margin %.12g\n", r.margin);
    std::printf("max_fd_grad_error %.3e\n", fd);
  });

  // passk -----------------------------------------------------------------
  auto* cmd_passk = app.add_subcommand("passk", "pass@k estimate");
  PassAtKInput pk;
  cmd_passk->add_option("--n", pk.n, "attempts")->required();
  cmd_passk->add_option("--c", pk.c, "correct attempts")->required();
  cmd_passk->add_option("--k", pk.k, "sample size")->required();
  cmd_passk->callback([&]() { std::printf("%.12g\n", pass_at_k(pk)); });

  // run ---------------------------------------------------------------------
  auto* cmd_run = app.add_subcommand("run", "full pipeline over a corpus");
  std::string run_corpus, run_out = "out", run_index;
  std::string run_mode = "complete+partial";
  bool run_filter = true;
  double run_beta = 0.1;
  std::uint64_t run_cap = 0;
  cmd_run->add_option("--corpus", run_corpus, "corpus directory");
  cmd_run->add_option("--manifest", run_index, "JSON prompt index");
  cmd_run->add_option("-o,--out", run_out, "output directory");
  cmd_run->add_option("--mode", run_mode, "complete | partial | complete+partial");
  cmd_run->add_flag("--filter-incorrect-signals,!--no-filter-incorrect-signals",
                    run_filter, "mask only contrast-signal slices");
  cmd_run->add_option("--beta", run_beta, "preference loss beta (recorded)");
  cmd_run->add_option("--cap", run_cap, "max pairs per prompt (0 = unlimited)");
  cmd_run->callback([&]() {
    PipelineConfig config;
    if (!config_path.empty()) {
      config = config_from_json(read_json_file(config_path));
    }
    // Flags override the config file field by field.
    if (!run_corpus.empty()) config.corpus_dir = run_corpus;
    if (!run_index.empty()) config.manifest_input = run_index;
    if (cmd_run->count("--out") || config.output_dir.empty()) {
      config.output_dir = run_out;
    }
    if (app.count("--n")) config.n_stimuli = n_stimuli;
    if (app.count("--seed")) config.seed = seed;
    if (app.count("--workers") || workers > 0) config.workers = workers;
    if (cmd_run->count("--mode") || config_path.empty()) {
      DatasetMode m = parse_mode_string(run_mode, run_filter);
      config.mode.use_complete_correct = m.use_complete_correct;
      config.mode.use_partial_correct = m.use_partial_correct;
    }
    if (cmd_run->count("--filter-incorrect-signals") ||
        cmd_run->count("--no-filter-incorrect-signals") || config_path.empty()) {
      config.mode.filter_incorrect_signals = run_filter;
    }
    if (cmd_run->count("--beta")) config.beta = run_beta;
    if (cmd_run->count("--cap")) config.pair_cap = run_cap;

    RunManifest manifest = run_pipeline(config);
    std::cout << "prompts " << manifest.prompts.size() << ", succeeded "
              << manifest.prompts_succeeded << ", pairs "
              << manifest.total_pairs << "\n";
    std::cout << stage_timings_table(manifest);
    std::cout << "output  " << manifest.prefs_path << "\n";
    std::cout << "hash    " << manifest.output_hash << "\n";
    if (manifest.prompts_succeeded == 0) throw ExitCode{2};
  });

  try {
    app.parse(argc, argv);
  } catch (const ExitCode& e) {
    return e.code;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    return failure_exit(e);
  } catch (const std::exception& e) {
    std::cerr << "salvkit: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
