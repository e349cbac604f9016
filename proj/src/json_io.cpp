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

#include "salvkit/json_io.hpp"

#include <charconv>

namespace salv {

namespace {

[[noreturn]] void bad(const std::string& what) {
  throw Error(ErrorKind::ConfigError, "malformed JSON input: " + what);
}

std::uint64_t parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    bad("'" + s + "' is not a decimal value");
  }
  return v;
}

std::vector<std::string> column_strings(const std::vector<std::uint64_t>& col) {
  std::vector<std::string> out;
  out.reserve(col.size());
  for (std::uint64_t v : col) out.push_back(std::to_string(v));
  return out;
}

std::vector<std::uint64_t> column_values(const nlohmann::json& j) {
  std::vector<std::uint64_t> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_string()) bad("column values must be decimal strings");
    out.push_back(parse_u64(v.get<std::string>()));
  }
  return out;
}

const char* role_name(PortRole role) {
  switch (role) {
    case PortRole::Clock: return "clock";
    case PortRole::Reset: return "reset";
    case PortRole::Data: return "data";
  }
  return "data";
}

PortRole role_from(const std::string& name) {
  if (name == "clock") return PortRole::Clock;
  if (name == "reset") return PortRole::Reset;
  if (name == "data") return PortRole::Data;
  bad("unknown port role '" + name + "'");
}

}  // namespace

ojson stimulus_to_json(const StimulusSet& set) {
  ojson j;
  j["seed"] = set.seed;
  j["n"] = set.n;
  ojson cols = ojson::object();
  for (const auto& [name, col] : set.columns) {
    cols[name] = column_strings(col);
  }
  j["columns"] = std::move(cols);
  ojson classes = ojson::array();
  for (const auto& pc : set.classes) {
    ojson c;
    c["signal"] = pc.signal;
    c["width"] = pc.width;
    c["role"] = role_name(pc.role);
    if (pc.role == PortRole::Reset) {
      c["reset_polarity"] = pc.active_low ? "active_low" : "active_high";
    }
    classes.push_back(std::move(c));
  }
  j["classes"] = std::move(classes);
  return j;
}

StimulusSet stimulus_from_json(const nlohmann::json& j) {
  StimulusSet set;
  try {
    set.seed = j.at("seed").get<std::uint64_t>();
    set.n = j.at("n").get<int>();
    for (const auto& [name, col] : j.at("columns").items()) {
      set.columns[name] = column_values(col);
    }
    for (const auto& c : j.at("classes")) {
      PortClass pc;
      pc.signal = c.at("signal").get<std::string>();
      pc.width = c.value("width", 1);
      pc.role = role_from(c.at("role").get<std::string>());
      if (pc.role == PortRole::Reset) {
        pc.active_low = c.value("reset_polarity", "active_high") ==
                        std::string("active_low");
      }
      set.classes.push_back(std::move(pc));
    }
  } catch (const nlohmann::json::exception& e) {
    bad(e.what());
  }
  return set;
}

ojson trace_to_json(const SimTrace& trace) {
  ojson j;
  j["cycles"] = trace.cycles;
  ojson outs = ojson::object();
  for (const auto& [name, col] : trace.outputs) {
    outs[name] = column_strings(col);
  }
  j["outputs"] = std::move(outs);
  return j;
}

SimTrace trace_from_json(const nlohmann::json& j) {
  SimTrace trace;
  try {
    trace.cycles = j.at("cycles").get<int>();
    for (const auto& [name, col] : j.at("outputs").items()) {
      trace.outputs[name] = column_values(col);
    }
  } catch (const nlohmann::json::exception& e) {
    bad(e.what());
  }
  return trace;
}

ojson report_to_json(const CandidateReport& report) {
  ojson j;
  j["candidate_id"] = report.candidate_id;
  j["status"] = candidate_status_name(report.status);
  ojson verdicts = ojson::array();
  for (const auto& v : report.verdicts) {
    ojson jv;
    jv["signal"] = v.signal;
    jv["correct"] = v.correct;
    if (v.first_mismatch_cycle) {
      jv["first_mismatch_cycle"] = *v.first_mismatch_cycle;
    }
    verdicts.push_back(std::move(jv));
  }
  j["verdicts"] = std::move(verdicts);
  j["correct_set"] = report.correct_set;
  return j;
}

CandidateReport report_from_json(const nlohmann::json& j) {
  CandidateReport report;
  try {
    report.candidate_id = j.at("candidate_id").get<int>();
    auto status = candidate_status_from_name(j.at("status").get<std::string>());
    if (!status) bad("unknown candidate status");
    report.status = *status;
    for (const auto& jv : j.at("verdicts")) {
      SignalVerdict v;
      v.signal = jv.at("signal").get<std::string>();
      v.correct = jv.at("correct").get<bool>();
      if (jv.contains("first_mismatch_cycle")) {
        v.first_mismatch_cycle = jv.at("first_mismatch_cycle").get<int>();
      }
      report.verdicts.push_back(std::move(v));
    }
    for (const auto& s : j.at("correct_set")) {
      report.correct_set.insert(s.get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    bad(e.what());
  }
  return report;
}

namespace {

ojson spans_to_json(const std::vector<Span>& spans) {
  ojson arr = ojson::array();
  for (const Span& s : spans) {
    arr.push_back(ojson::array({s.start, s.end}));
  }
  return arr;
}

std::vector<Span> spans_from_json(const nlohmann::json& j) {
  std::vector<Span> out;
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2) bad("span must be [start, end]");
    out.push_back(Span{pair[0].get<std::size_t>(), pair[1].get<std::size_t>()});
  }
  return out;
}

}  // namespace

ojson pair_to_json(const PreferencePair& pair) {
  ojson j;
  j["prompt_id"] = pair.prompt_id;
  j["w_id"] = pair.w_id;
  j["l_id"] = pair.l_id;
  j["y_w"] = pair.y_w.text;
  j["y_l"] = pair.y_l.text;
  j["contrast"] = pair.contrast;
  j["w_mask"] = spans_to_json(pair.w_mask);
  j["l_mask"] = spans_to_json(pair.l_mask);
  j["w_fully_correct"] = pair.w_fully_correct;
  return j;
}

PreferencePair pair_from_json(const nlohmann::json& j) {
  PreferencePair pair;
  try {
    pair.prompt_id = j.at("prompt_id").get<std::string>();
    pair.w_id = j.at("w_id").get<int>();
    pair.l_id = j.at("l_id").get<int>();
    pair.y_w = SourceText{j.at("y_w").get<std::string>(), pair.prompt_id + "#w"};
    pair.y_l = SourceText{j.at("y_l").get<std::string>(), pair.prompt_id + "#l"};
    for (const auto& c : j.at("contrast")) {
      pair.contrast.insert(c.get<std::string>());
    }
    pair.w_mask = spans_from_json(j.at("w_mask"));
    pair.l_mask = spans_from_json(j.at("l_mask"));
    pair.w_fully_correct = j.at("w_fully_correct").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    bad(e.what());
  }
  return pair;
}

DpoBatch batch_from_json(const nlohmann::json& j) {
  DpoBatch batch;
  try {
    batch.w_policy_logps = j.at("w_policy_logps").get<std::vector<double>>();
    batch.w_ref_logps = j.at("w_ref_logps").get<std::vector<double>>();
    batch.l_policy_logps = j.at("l_policy_logps").get<std::vector<double>>();
    batch.l_ref_logps = j.at("l_ref_logps").get<std::vector<double>>();
    batch.w_mask = j.at("w_mask").get<std::vector<bool>>();
    batch.l_mask = j.at("l_mask").get<std::vector<bool>>();
    batch.beta = j.value("beta", 0.1);
  } catch (const nlohmann::json::exception& e) {
    bad(e.what());
  }
  return batch;
}

ojson batch_to_json(const DpoBatch& batch) {
  ojson j;
  j["w_policy_logps"] = batch.w_policy_logps;
  j["w_ref_logps"] = batch.w_ref_logps;
  j["l_policy_logps"] = batch.l_policy_logps;
  j["l_ref_logps"] = batch.l_ref_logps;
  j["w_mask"] = batch.w_mask;
  j["l_mask"] = batch.l_mask;
  j["beta"] = batch.beta;
  return j;
}

}  // namespace salv
