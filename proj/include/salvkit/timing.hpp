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

#ifndef SALVKIT_TIMING_HPP
#define SALVKIT_TIMING_HPP

#include <chrono>
#include <cstdint>

namespace salv {

// Per-stage wall-clock accumulators (monotonic clock). Excluded from output
// hashing; they exist to report per-sample means.
struct StageTimes {
  struct Stage {
    std::uint64_t count = 0;
    double seconds = 0.0;
    double mean() const { return count == 0 ? 0.0 : seconds / double(count); }
    void merge(const Stage& other) {
      count += other.count;
      seconds += other.seconds;
    }
  };

  Stage parse;
  Stage graph_slice;
  Stage simulate;
  Stage compare;

  void merge(const StageTimes& other) {
    parse.merge(other.parse);
    graph_slice.merge(other.graph_slice);
    simulate.merge(other.simulate);
    compare.merge(other.compare);
  }
};

// Accumulates one sample into a stage on destruction.
class ScopedStage {
 public:
  explicit ScopedStage(StageTimes::Stage* stage)
      : stage_(stage), start_(std::chrono::steady_clock::now()) {}
  ~ScopedStage() {
    if (stage_ == nullptr) return;
    std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
    stage_->count += 1;
    stage_->seconds += dt.count();
  }
  ScopedStage(const ScopedStage&) = delete;
  ScopedStage& operator=(const ScopedStage&) = delete;

 private:
  StageTimes::Stage* stage_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace salv

#endif  // SALVKIT_TIMING_HPP
