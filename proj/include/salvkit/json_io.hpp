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

#ifndef SALVKIT_JSON_IO_HPP
#define SALVKIT_JSON_IO_HPP

#include <json.hpp>

#include "salvkit/dpomath.hpp"
#include "salvkit/preference.hpp"
#include "salvkit/simulator.hpp"
#include "salvkit/stimulus.hpp"
#include "salvkit/verifier.hpp"

// JSON surfaces for the file formats the CLI reads and writes. Field order is
// pinned with ordered_json so byte-level determinism holds; simulation values
// travel as decimal strings to stay 64-bit safe.

namespace salv {

using ojson = nlohmann::ordered_json;

ojson stimulus_to_json(const StimulusSet& set);
StimulusSet stimulus_from_json(const nlohmann::json& j);  // throws ConfigError

ojson trace_to_json(const SimTrace& trace);
SimTrace trace_from_json(const nlohmann::json& j);

ojson report_to_json(const CandidateReport& report);
CandidateReport report_from_json(const nlohmann::json& j);

ojson pair_to_json(const PreferencePair& pair);
PreferencePair pair_from_json(const nlohmann::json& j);

DpoBatch batch_from_json(const nlohmann::json& j);
ojson batch_to_json(const DpoBatch& batch);

}  // namespace salv

#endif  // SALVKIT_JSON_IO_HPP
